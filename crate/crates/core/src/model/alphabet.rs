use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, ordered set of distinct text labels. Indices are 0-based and
/// stable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_path(symbols.into_iter().map(Into::into).collect(), "")
    }

    pub(crate) fn with_path(symbols: Vec<String>, path: &str) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Schema {
                path: path.to_string(),
                message: "alphabet must be nonempty".into(),
            });
        }
        let mut seen = HashSet::with_capacity(symbols.len());
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateLabel {
                    path: path.to_string(),
                    label: s.clone(),
                });
            }
        }
        Ok(Self { symbols })
    }

    /// `0..n` rendered as decimal labels.
    pub fn numbered(n: usize) -> Self {
        assert!(n > 0, "alphabet must be nonempty");
        Self {
            symbols: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.symbols[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Alphabet of `n`-tuples in lexicographic order, first coordinate most
    /// significant. Labels look like `(a,b)`.
    pub fn power(&self, n: usize) -> Self {
        let total = self.len().pow(n as u32);
        let symbols = (0..total)
            .map(|idx| {
                let digits = crate::model::block::decode(idx, self.len(), n);
                let parts: Vec<&str> = digits.iter().map(|&d| self.label(d)).collect();
                format!("({})", parts.join(","))
            })
            .collect();
        Self { symbols }
    }
}

impl TryFrom<Vec<String>> for Alphabet {
    type Error = Error;

    fn try_from(v: Vec<String>) -> Result<Self> {
        Self::with_path(v, "")
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}
