mod common;

use std::collections::BTreeSet;

use fnpriv::characterize::{decide, verify_witness, Decision};
use fnpriv::model::FunctionTriple;
use fnpriv::privacy::{check_correct, check_transcript_privacy};
use fnpriv::protocol::Party;

fn computable(t: &FunctionTriple) -> bool {
    matches!(decide(t), Decision::Computable(_))
}

#[test]
fn decisions_are_sound_on_all_binary_2x2() {
    for t in common::all_binary_2x2() {
        match decide(&t) {
            Decision::Computable(tree) => {
                assert!(check_correct(&tree, &t).unwrap().is_perfect());
                assert!(check_transcript_privacy(&tree, &t, Party::Alice)
                    .unwrap()
                    .is_ok());
                assert!(check_transcript_privacy(&tree, &t, Party::Bob)
                    .unwrap()
                    .is_ok());
            }
            Decision::NotComputable(w) => {
                assert!(verify_witness(&t, &w.rect));
                assert!(w.certify(&t));
            }
        }
    }
}

#[test]
fn transposing_keeps_the_verdict() {
    for t in common::all_binary_2x2() {
        assert_eq!(computable(&t), computable(&t.transposed()));
    }
}

/// Classic decomposability: a submatrix splits along an axis when its lines
/// fall into two or more groups such that lines from different groups never
/// agree in any position; every group must then decompose in turn.
fn classic(f: &dyn Fn(usize, usize) -> u8, rows: &BTreeSet<usize>, cols: &BTreeSet<usize>) -> bool {
    let first = f(*rows.first().unwrap(), *cols.first().unwrap());
    if rows.iter().all(|&x| cols.iter().all(|&y| f(x, y) == first)) {
        return true;
    }
    let groups = |lines: &BTreeSet<usize>, agree: &dyn Fn(usize, usize) -> bool| {
        let mut out: Vec<BTreeSet<usize>> = Vec::new();
        let mut left: Vec<usize> = lines.iter().copied().collect();
        while let Some(seed) = left.pop() {
            let mut group = BTreeSet::from([seed]);
            let mut grew = true;
            while grew {
                grew = false;
                left.retain(|&l| {
                    if group.iter().any(|&g| agree(g, l)) {
                        group.insert(l);
                        grew = true;
                        false
                    } else {
                        true
                    }
                });
            }
            out.push(group);
        }
        out
    };
    let row_groups = groups(rows, &|a, b| cols.iter().any(|&y| f(a, y) == f(b, y)));
    if row_groups.len() > 1 && row_groups.iter().all(|g| classic(f, g, cols)) {
        return true;
    }
    let col_groups = groups(cols, &|a, b| rows.iter().any(|&x| f(x, a) == f(x, b)));
    col_groups.len() > 1 && col_groups.iter().all(|g| classic(f, rows, g))
}

#[test]
fn classic_privacy_matches_plain_decomposition() {
    for (r, c) in [(2usize, 2usize), (2, 3)] {
        for mask in 0..(1u32 << (r * c)) {
            let t = common::standard(r, c, mask);
            let f = |x: usize, y: usize| ((mask >> (x * c + y)) & 1) as u8;
            let rows: BTreeSet<usize> = (0..r).collect();
            let cols: BTreeSet<usize> = (0..c).collect();
            assert_eq!(
                computable(&t),
                classic(&f, &rows, &cols),
                "{r}x{c} mask {mask:b}"
            );
        }
    }
}
