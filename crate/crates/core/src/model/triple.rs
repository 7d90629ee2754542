use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{json as j, Alphabet, ValueTable};

/// The function to compute (`f`) together with the function hidden from
/// Alice (`g`) and the one hidden from Bob (`h`), all tabulated over
/// `X x Y` with rows indexed by Alice's input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTriple {
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    f: ValueTable,
    g: ValueTable,
    h: ValueTable,
}

impl FunctionTriple {
    pub fn new(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        f: ValueTable,
        g: ValueTable,
        h: ValueTable,
    ) -> Result<Self> {
        for (name, t) in [("f", &f), ("g", &g), ("h", &h)] {
            if t.rows() != x_alphabet.len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/{name}"),
                    expected: x_alphabet.len(),
                    found: t.rows(),
                });
            }
            if t.cols() != y_alphabet.len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/{name}/0"),
                    expected: y_alphabet.len(),
                    found: t.cols(),
                });
            }
        }
        Ok(Self {
            x_alphabet,
            y_alphabet,
            f,
            g,
            h,
        })
    }

    /// Classic two-party privacy: Alice must learn nothing about `y`, Bob
    /// nothing about `x`, beyond `f`.
    pub fn standard(x_alphabet: Alphabet, y_alphabet: Alphabet, f: ValueTable) -> Result<Self> {
        let (r, c) = (x_alphabet.len(), y_alphabet.len());
        let g = ValueTable::from_fn(r, c, |_, y| y_alphabet.label(y).to_string());
        let h = ValueTable::from_fn(r, c, |x, _| x_alphabet.label(x).to_string());
        Self::new(x_alphabet, y_alphabet, f, g, h)
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.x_alphabet
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.y_alphabet
    }

    pub fn f(&self) -> &ValueTable {
        &self.f
    }

    pub fn g(&self) -> &ValueTable {
        &self.g
    }

    pub fn h(&self) -> &ValueTable {
        &self.h
    }

    pub fn x_len(&self) -> usize {
        self.x_alphabet.len()
    }

    pub fn y_len(&self) -> usize {
        self.y_alphabet.len()
    }

    /// Swaps the parties: `f` is transposed and the roles of `g` and `h`
    /// exchange.
    pub fn transposed(&self) -> Self {
        Self {
            x_alphabet: self.y_alphabet.clone(),
            y_alphabet: self.x_alphabet.clone(),
            f: self.f.transpose(),
            g: self.h.transpose(),
            h: self.g.transpose(),
        }
    }

    pub fn check_limits(&self, limits: &Limits) -> Result<()> {
        let n = self.x_len().max(self.y_len());
        if n > limits.max_alphabet {
            return Err(Error::SizeCap {
                what: "alphabet",
                needed: n as u128,
                cap: limits.max_alphabet as u128,
            });
        }
        Ok(())
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = j::object(value, "")?;
        let xa = j::alphabet(obj, "x_alphabet", "")?;
        let ya = j::alphabet(obj, "y_alphabet", "")?;
        let table = |name: &str| {
            ValueTable::from_json(
                j::field(obj, name, "")?,
                xa.len(),
                ya.len(),
                &format!("/{name}"),
            )
        };
        let (f, g, h) = (table("f")?, table("g")?, table("h")?);
        Self::new(xa, ya, f, g, h)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x_alphabet": self.x_alphabet.symbols(),
            "y_alphabet": self.y_alphabet.symbols(),
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "h": self.h.to_json(),
        })
    }
}

/// Parses a triple document (`x_alphabet`, `y_alphabet`, `f`, `g`, `h`).
pub fn parse_triple(document: &str) -> Result<FunctionTriple> {
    FunctionTriple::from_json(&j::parse_document(document)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE_I: &str = r#"{
        "x_alphabet": ["x1", "x2", "x3"],
        "y_alphabet": ["y1", "y2", "y3"],
        "f": [[0, 0, 1], [0, 1, 1], [2, 1, 0]],
        "g": [[1, 2, 2], [1, 2, 2], [1, 2, 2]],
        "h": [[1, 1, 1], [1, 1, 1], [2, 2, 2]]
    }"#;

    #[test]
    fn parses_table_one() {
        let t = parse_triple(TABLE_I).unwrap();
        assert_eq!(t.f().label(0, 2), "1");
        assert_eq!(t.x_len(), 3);
        assert_eq!(t.g().label(2, 1), "2");
    }

    #[test]
    fn trivial_one_by_one() {
        let t = parse_triple(
            r#"{"x_alphabet":["a"],"y_alphabet":["b"],"f":[["0"]],"g":[["0"]],"h":[["0"]]}"#,
        )
        .unwrap();
        assert!(t.f().is_constant());
    }

    #[test]
    fn ragged_rows_are_rejected_with_path() {
        let doc = r#"{"x_alphabet":["a","b"],"y_alphabet":["1","2","3"],
            "f":[[0,0,1],[0,1]],"g":[[0,0,0],[0,0,0]],"h":[[0,0,0],[0,0,0]]}"#;
        match parse_triple(doc) {
            Err(Error::DimensionMismatch {
                path,
                expected,
                found,
            }) => {
                assert_eq!(path, "/f/1");
                assert_eq!((expected, found), (3, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_and_duplicate_fields() {
        let missing = r#"{"x_alphabet":["a"],"y_alphabet":["b"],"f":[[0]],"g":[[0]]}"#;
        assert!(matches!(
            parse_triple(missing),
            Err(Error::MissingField { ref field, .. }) if field == "h"
        ));
        let dup = r#"{"x_alphabet":["a","a"],"y_alphabet":["b"],"f":[[0],[0]],"g":[[0],[0]],"h":[[0],[0]]}"#;
        assert!(matches!(
            parse_triple(dup),
            Err(Error::DuplicateLabel { ref path, .. }) if path == "/x_alphabet"
        ));
    }

    #[test]
    fn transpose_twice_is_identity() {
        let t = parse_triple(TABLE_I).unwrap();
        assert_eq!(t.transposed().transposed(), t);
    }
}
