use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::rational::{self, Rational};
use crate::model::{block, json as j, Alphabet};

/// An exact joint pmf over `X x Y`, stored row-major. Entries are
/// nonnegative and sum to exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    pmf: Vec<Rational>,
}

impl JointDistribution {
    pub fn new(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        pmf: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if pmf.len() != x_alphabet.len() {
            return Err(Error::DimensionMismatch {
                path: "/pmf".into(),
                expected: x_alphabet.len(),
                found: pmf.len(),
            });
        }
        let mut flat = Vec::with_capacity(x_alphabet.len() * y_alphabet.len());
        for (x, row) in pmf.into_iter().enumerate() {
            if row.len() != y_alphabet.len() {
                return Err(Error::DimensionMismatch {
                    path: format!("/pmf/{x}"),
                    expected: y_alphabet.len(),
                    found: row.len(),
                });
            }
            for (y, p) in row.into_iter().enumerate() {
                if rational::is_negative(&p) {
                    return Err(Error::NegativeEntry {
                        path: format!("/pmf/{x}/{y}"),
                        value: rational::format(&p),
                    });
                }
                flat.push(p);
            }
        }
        let sum: Rational = flat.iter().sum();
        if sum != rational::one() {
            return Err(Error::NotNormalized {
                path: "/pmf".into(),
                sum: rational::format(&sum),
            });
        }
        Ok(Self {
            x_alphabet,
            y_alphabet,
            pmf: flat,
        })
    }

    pub fn uniform(x_alphabet: Alphabet, y_alphabet: Alphabet) -> Self {
        let n = x_alphabet.len() * y_alphabet.len();
        let p = Rational::new(1.into(), n.into());
        Self {
            pmf: vec![p; n],
            x_alphabet,
            y_alphabet,
        }
    }

    pub fn point_mass(x_alphabet: Alphabet, y_alphabet: Alphabet, x: usize, y: usize) -> Self {
        let cols = y_alphabet.len();
        let mut pmf = vec![rational::zero(); x_alphabet.len() * cols];
        pmf[x * cols + y] = rational::one();
        Self {
            x_alphabet,
            y_alphabet,
            pmf,
        }
    }

    /// Product distribution `p(x) q(y)`.
    pub fn product(
        x_alphabet: Alphabet,
        px: &[Rational],
        y_alphabet: Alphabet,
        py: &[Rational],
    ) -> Result<Self> {
        let rows = px
            .iter()
            .map(|a| py.iter().map(|b| a * b).collect())
            .collect();
        Self::new(x_alphabet, y_alphabet, rows)
    }

    /// Equal mass on each listed cell. Repeated cells are merged.
    pub fn uniform_on(
        x_alphabet: Alphabet,
        y_alphabet: Alphabet,
        cells: &[(usize, usize)],
    ) -> Result<Self> {
        let mut rows = vec![vec![rational::zero(); y_alphabet.len()]; x_alphabet.len()];
        let w = Rational::new(1.into(), cells.len().into());
        for &(x, y) in cells {
            if x >= x_alphabet.len() {
                return Err(Error::OutOfRange {
                    what: "x alphabet",
                    index: x,
                });
            }
            if y >= y_alphabet.len() {
                return Err(Error::OutOfRange {
                    what: "y alphabet",
                    index: y,
                });
            }
            rows[x][y] += &w;
        }
        Self::new(x_alphabet, y_alphabet, rows)
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.x_alphabet
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.y_alphabet
    }

    pub fn x_len(&self) -> usize {
        self.x_alphabet.len()
    }

    pub fn y_len(&self) -> usize {
        self.y_alphabet.len()
    }

    pub fn p(&self, x: usize, y: usize) -> &Rational {
        &self.pmf[x * self.y_len() + y]
    }

    /// Cells with positive probability, row-major.
    pub fn support(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let cols = self.y_len();
        self.pmf
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (i / cols, i % cols, p))
    }

    pub fn x_marginal(&self) -> Vec<Rational> {
        (0..self.x_len())
            .map(|x| (0..self.y_len()).map(|y| self.p(x, y)).sum())
            .collect()
    }

    pub fn y_marginal(&self) -> Vec<Rational> {
        (0..self.y_len())
            .map(|y| (0..self.x_len()).map(|x| self.p(x, y)).sum())
            .collect()
    }

    /// Joint law of `(X_i, Y_i)` when `self` is an `n`-fold block
    /// distribution over a base of size `base_x x base_y`.
    pub fn coordinate_marginal(
        &self,
        base_x: usize,
        base_y: usize,
        n: usize,
        i: usize,
    ) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![rational::zero(); base_y]; base_x];
        for (xb, yb, p) in self.support() {
            let x = block::decode(xb, base_x, n)[i];
            let y = block::decode(yb, base_y, n)[i];
            out[x][y] += p;
        }
        out
    }

    /// The distribution of `n` i.i.d. copies, over `X^n x Y^n`.
    pub fn iid_extend(&self, n: usize, limits: &Limits) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "block length must be at least 1".into(),
            ));
        }
        let cells = block_cells(self.x_len(), self.y_len(), n);
        if cells > limits.max_block_outcomes {
            return Err(Error::SizeCap {
                what: "block distribution",
                needed: cells,
                cap: limits.max_block_outcomes,
            });
        }
        let (bx, by) = (self.x_len(), self.y_len());
        let rows = bx.pow(n as u32);
        let cols = by.pow(n as u32);
        let mut pmf = Vec::with_capacity(rows * cols);
        for xb in 0..rows {
            let xs = block::decode(xb, bx, n);
            for yb in 0..cols {
                let ys = block::decode(yb, by, n);
                let mut p = rational::one();
                for (&x, &y) in xs.iter().zip(&ys) {
                    let q = self.p(x, y);
                    if q.is_zero() {
                        p = rational::zero();
                        break;
                    }
                    p *= q;
                }
                pmf.push(p);
            }
        }
        Ok(Self {
            x_alphabet: self.x_alphabet.power(n),
            y_alphabet: self.y_alphabet.power(n),
            pmf,
        })
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = j::object(value, "")?;
        let xa = j::alphabet(obj, "x_alphabet", "")?;
        let ya = j::alphabet(obj, "y_alphabet", "")?;
        let rows = rational_rows(j::field(obj, "pmf", "")?, "/pmf")?;
        Self::new(xa, ya, rows)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = (0..self.x_len())
            .map(|x| {
                (0..self.y_len())
                    .map(|y| rational::format(self.p(x, y)))
                    .collect()
            })
            .collect();
        json!({
            "x_alphabet": self.x_alphabet.symbols(),
            "y_alphabet": self.y_alphabet.symbols(),
            "pmf": rows,
        })
    }
}

pub(crate) fn block_cells(x: usize, y: usize, n: usize) -> u128 {
    (x as u128)
        .checked_pow(n as u32)
        .and_then(|a| {
            (y as u128)
                .checked_pow(n as u32)
                .and_then(|b| a.checked_mul(b))
        })
        .unwrap_or(u128::MAX)
}

pub(crate) fn rational_rows(value: &Value, path: &str) -> Result<Vec<Vec<Rational>>> {
    let outer = value.as_array().ok_or_else(|| Error::Schema {
        path: path.to_string(),
        message: "expected an array of rows".into(),
    })?;
    outer
        .iter()
        .enumerate()
        .map(|(x, row)| {
            let rp = format!("{path}/{x}");
            let row = row.as_array().ok_or_else(|| Error::Schema {
                path: rp.clone(),
                message: "expected an array of rationals".into(),
            })?;
            row.iter()
                .enumerate()
                .map(|(y, cell)| {
                    let cp = format!("{rp}/{y}");
                    match cell {
                        Value::String(s) => rational::parse(s, &cp),
                        Value::Number(n) if n.is_i64() || n.is_u64() => {
                            rational::parse(&n.to_string(), &cp)
                        }
                        other => Err(Error::ParseRational {
                            path: cp,
                            text: other.to_string(),
                        }),
                    }
                })
                .collect()
        })
        .collect()
}

/// Parses a distribution document (`x_alphabet`, `y_alphabet`, `pmf`).
pub fn parse_distribution(document: &str) -> Result<JointDistribution> {
    JointDistribution::from_json(&j::parse_document(document)?)
}
