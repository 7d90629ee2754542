use serde::{Deserialize, Serialize};

/// Size caps applied by operations whose cost grows combinatorially.
///
/// These are configuration rather than hard limits of the algorithms; raise
/// them when the machine can afford it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum size of a single-letter alphabet.
    pub max_alphabet: usize,
    /// Maximum number of cells `|X|^n * |Y|^n` of a block distribution.
    pub max_block_outcomes: u128,
    /// Maximum sender alphabet for the set-partition search (Bell-number growth).
    pub max_partition_inputs: usize,
    /// Maximum block length accepted by the Example-1 builder.
    pub max_example_block: usize,
    /// Maximum number of encoder pairs visited by the non-interactive search.
    pub max_encoder_pairs: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_alphabet: 64,
            max_block_outcomes: 1 << 20,
            max_partition_inputs: 10,
            max_example_block: 3,
            max_encoder_pairs: 1 << 24,
        }
    }
}
