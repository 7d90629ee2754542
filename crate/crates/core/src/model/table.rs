use std::collections::HashMap;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::model::block;

/// Interned identifier of a function value. Only equality is meaningful.
pub type ValueId = u32;

/// A `|X| x |Y|` table of opaque value labels, interned so that comparisons
/// are integer comparisons. Ids are assigned in first-appearance (row-major)
/// order, which makes two tables with the same labels in the same places
/// structurally equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    rows: usize,
    cols: usize,
    cells: Vec<ValueId>,
    labels: Vec<String>,
}

impl ValueTable {
    pub fn from_fn<F, S>(rows: usize, cols: usize, mut value: F) -> Self
    where
        F: FnMut(usize, usize) -> S,
        S: Into<String>,
    {
        let mut interner = Interner::default();
        let mut cells = Vec::with_capacity(rows * cols);
        for x in 0..rows {
            for y in 0..cols {
                cells.push(interner.intern(value(x, y).into()));
            }
        }
        Self {
            rows,
            cols,
            cells,
            labels: interner.labels,
        }
    }

    pub fn from_rows<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    path: format!("/{i}"),
                    expected: c,
                    found: row.len(),
                });
            }
        }
        Ok(Self::from_fn(r, c, |x, y| rows[x][y].as_ref().to_string()))
    }

    /// Reads a row-major JSON table of strings or numbers with exact
    /// dimensions `rows x cols`.
    pub fn from_json(value: &Value, rows: usize, cols: usize, path: &str) -> Result<Self> {
        let outer = value.as_array().ok_or_else(|| Error::Schema {
            path: path.to_string(),
            message: "expected an array of rows".into(),
        })?;
        if outer.len() != rows {
            return Err(Error::DimensionMismatch {
                path: path.to_string(),
                expected: rows,
                found: outer.len(),
            });
        }
        let mut labels = Vec::with_capacity(rows);
        for (x, row) in outer.iter().enumerate() {
            let row_path = format!("{path}/{x}");
            let row = row.as_array().ok_or_else(|| Error::Schema {
                path: row_path.clone(),
                message: "expected an array of values".into(),
            })?;
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    path: row_path,
                    expected: cols,
                    found: row.len(),
                });
            }
            let mut out = Vec::with_capacity(cols);
            for (y, cell) in row.iter().enumerate() {
                out.push(value_label(cell, &format!("{row_path}/{y}"))?);
            }
            labels.push(out);
        }
        Self::from_rows(&labels)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|x| {
                    Value::Array(
                        (0..self.cols)
                            .map(|y| Value::String(self.label(x, y).to_string()))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> ValueId {
        self.cells[x * self.cols + y]
    }

    pub fn label(&self, x: usize, y: usize) -> &str {
        &self.labels[self.get(x, y) as usize]
    }

    pub fn label_of(&self, id: ValueId) -> &str {
        &self.labels[id as usize]
    }

    pub fn id_of(&self, label: &str) -> Option<ValueId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as ValueId)
    }

    /// Number of distinct values appearing in the table.
    pub fn distinct(&self) -> usize {
        self.labels.len()
    }

    pub fn is_constant(&self) -> bool {
        self.labels.len() <= 1
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |x, y| self.label(y, x).to_string())
    }

    /// Table over `X^n x Y^n` whose entry is the tuple of per-coordinate
    /// values, labelled `(v1,...,vn)`.
    pub fn iid_extend(&self, n: usize) -> Self {
        let rows = self.rows.pow(n as u32);
        let cols = self.cols.pow(n as u32);
        Self::from_fn(rows, cols, |xb, yb| {
            let xs = block::decode(xb, self.rows, n);
            let ys = block::decode(yb, self.cols, n);
            let parts: Vec<&str> = xs
                .iter()
                .zip(&ys)
                .map(|(&x, &y)| self.label(x, y))
                .collect();
            format!("({})", parts.join(","))
        })
    }
}

fn value_label(cell: &Value, path: &str) -> Result<String> {
    match cell {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::Schema {
            path: path.to_string(),
            message: "expected a string or number".into(),
        }),
    }
}

#[derive(Default)]
struct Interner {
    ids: HashMap<String, ValueId>,
    labels: Vec<String>,
}

impl Interner {
    fn intern(&mut self, label: String) -> ValueId {
        if let Some(&id) = self.ids.get(&label) {
            return id;
        }
        let id = self.labels.len() as ValueId;
        self.ids.insert(label.clone(), id);
        self.labels.push(label);
        id
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn interns_in_row_major_order() {
        let t = ValueTable::from_rows(&[vec!["b", "a"], vec!["a", "c"]]).unwrap();
        assert_eq!(t.get(0, 0), 0);
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(1, 0), 1);
        assert_eq!(t.distinct(), 3);
    }

    #[test]
    fn json_reports_path_of_short_row() {
        let err = ValueTable::from_json(&json!([[0, 0, 1], [0, 1]]), 2, 3, "/f").unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                path: "/f/1".into(),
                expected: 3,
                found: 2
            }
        );
    }

    #[test]
    fn iid_extension_tuples_values() {
        let t = ValueTable::from_rows(&[vec!["0", "1"], vec!["1", "0"]]).unwrap();
        let t2 = t.iid_extend(2);
        assert_eq!(t2.rows(), 4);
        // x = (1,0), y = (0,0) -> (f(1,0), f(0,0)) = (1,0)
        assert_eq!(t2.label(2, 0), "(1,0)");
    }
}
