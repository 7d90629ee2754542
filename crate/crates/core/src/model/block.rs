//! Mixed-radix indexing of `n`-tuples over a base alphabet.

/// Digits of `index` in base `base`, most significant first, `n` digits.
pub fn decode(mut index: usize, base: usize, n: usize) -> Vec<usize> {
    let mut digits = vec![0; n];
    for slot in digits.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    digits
}

pub fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}
