#![allow(dead_code)]

use fnpriv::model::{Alphabet, FunctionTriple, ValueTable};

pub fn bit_table(rows: usize, cols: usize, mask: u32) -> ValueTable {
    ValueTable::from_fn(rows, cols, |x, y| {
        ((mask >> (x * cols + y)) & 1).to_string()
    })
}

/// All 4096 triples on a 2x2 domain with binary f, g, h.
pub fn all_binary_2x2() -> impl Iterator<Item = FunctionTriple> {
    (0u32..4096).map(|m| {
        FunctionTriple::new(
            Alphabet::numbered(2),
            Alphabet::numbered(2),
            bit_table(2, 2, m & 15),
            bit_table(2, 2, (m >> 4) & 15),
            bit_table(2, 2, (m >> 8) & 15),
        )
        .unwrap()
    })
}

pub fn standard(rows: usize, cols: usize, mask: u32) -> FunctionTriple {
    FunctionTriple::standard(
        Alphabet::numbered(rows),
        Alphabet::numbered(cols),
        bit_table(rows, cols, mask),
    )
    .unwrap()
}
