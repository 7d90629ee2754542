use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A combinatorial rectangle `C x D` of row (Alice) and column (Bob)
/// indices. Both index lists are sorted, distinct and nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRect")]
pub struct SubRect {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

#[derive(Deserialize)]
struct RawRect {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl TryFrom<RawRect> for SubRect {
    type Error = Error;

    fn try_from(raw: RawRect) -> Result<Self> {
        SubRect::new(raw.rows, raw.cols)
    }
}

impl SubRect {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        if rows.is_empty() || cols.is_empty() {
            return Err(Error::InvalidArgument(
                "rectangle must have at least one row and one column".into(),
            ));
        }
        Ok(Self { rows, cols })
    }

    pub fn full(x_len: usize, y_len: usize) -> Self {
        Self {
            rows: (0..x_len).collect(),
            cols: (0..y_len).collect(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    pub fn contains_row(&self, x: usize) -> bool {
        self.rows.binary_search(&x).is_ok()
    }

    pub fn contains_col(&self, y: usize) -> bool {
        self.cols.binary_search(&y).is_ok()
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.contains_row(x) && self.contains_col(y)
    }

    /// Checks that every index lies inside an `x_len x y_len` grid.
    pub fn validate(&self, x_len: usize, y_len: usize) -> Result<()> {
        if let Some(&x) = self.rows.iter().find(|&&x| x >= x_len) {
            return Err(Error::OutOfRange {
                what: "x alphabet",
                index: x,
            });
        }
        if let Some(&y) = self.cols.iter().find(|&&y| y >= y_len) {
            return Err(Error::OutOfRange {
                what: "y alphabet",
                index: y,
            });
        }
        Ok(())
    }

    pub fn with_rows(&self, rows: Vec<usize>) -> Result<Self> {
        Self::new(rows, self.cols.clone())
    }

    pub fn with_cols(&self, cols: Vec<usize>) -> Result<Self> {
        Self::new(self.rows.clone(), cols)
    }

    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .flat_map(move |&x| self.cols.iter().map(move |&y| (x, y)))
    }

    pub fn transposed(&self) -> Self {
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }
}
