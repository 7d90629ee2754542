//! Small named instances used by the tests, the CLI examples and the
//! acceptance suite.

use crate::model::rational::ratio;
use crate::model::{Alphabet, FunctionTriple, JointDistribution, ValueTable};

fn alphabet(labels: &[&str]) -> Alphabet {
    Alphabet::new(labels.iter().copied()).expect("fixture alphabets are valid")
}

fn table(rows: &[&[&str]]) -> ValueTable {
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.to_vec()).collect();
    ValueTable::from_rows(&rows).expect("fixture tables are rectangular")
}

/// 3x3 `f` with `g` depending only on `y` (values 1,2,2) and `h` only on `x`
/// (values 1,1,2). Securely computable, although `f` alone is not.
pub fn mixed_3x3() -> FunctionTriple {
    let f = table(&[&["0", "0", "1"], &["0", "1", "1"], &["2", "1", "0"]]);
    let g = ValueTable::from_fn(3, 3, |_, y| ["1", "2", "2"][y]);
    let h = ValueTable::from_fn(3, 3, |x, _| ["1", "1", "2"][x]);
    FunctionTriple::new(
        alphabet(&["x1", "x2", "x3"]),
        alphabet(&["y1", "y2", "y3"]),
        f,
        g,
        h,
    )
    .expect("fixture is consistent")
}

/// The same `f` as [`mixed_3x3`] under classic privacy (`g = y`, `h = x`).
pub fn mixed_3x3_standard() -> FunctionTriple {
    let t = mixed_3x3();
    FunctionTriple::standard(
        t.x_alphabet().clone(),
        t.y_alphabet().clone(),
        t.f().clone(),
    )
    .expect("fixture is consistent")
}

/// Binary AND under classic privacy.
pub fn and_standard() -> FunctionTriple {
    let bits = alphabet(&["0", "1"]);
    FunctionTriple::standard(bits.clone(), bits, table(&[&["0", "0"], &["0", "1"]]))
        .expect("fixture is consistent")
}

/// `x` binary, `y = (y', y'')`; `f = x AND y'`, `g = y''`, `h = x`.
pub fn masked_and() -> FunctionTriple {
    let ys = ["00", "01", "10", "11"];
    let f = ValueTable::from_fn(2, 4, |x, y| if x == 1 && y >= 2 { "1" } else { "0" });
    let g = ValueTable::from_fn(2, 4, |_, y| &ys[y][1..]);
    let h = ValueTable::from_fn(2, 4, |x, _| ["0", "1"][x]);
    FunctionTriple::new(alphabet(&["0", "1"]), alphabet(&ys), f, g, h)
        .expect("fixture is consistent")
}

/// Masked AND with the parties' roles exchanged: the one-message sender
/// (rows) holds `(y', y'')`, the receiver (columns) holds the bit `x`.
/// `f = x AND y'`, `g = y''` stays hidden from the receiver, `h = x`.
pub fn masked_and_swapped() -> FunctionTriple {
    let xs = ["00", "01", "10", "11"];
    let f = ValueTable::from_fn(4, 2, |u, x| if x == 1 && u >= 2 { "1" } else { "0" });
    let g = ValueTable::from_fn(4, 2, |u, _| &xs[u][1..]);
    let h = ValueTable::from_fn(4, 2, |_, x| ["0", "1"][x]);
    FunctionTriple::new(alphabet(&xs), alphabet(&["0", "1"]), f, g, h)
        .expect("fixture is consistent")
}

/// Uniform distribution over the swapped masked-AND inputs.
pub fn masked_and_swapped_uniform() -> JointDistribution {
    let t = masked_and_swapped();
    JointDistribution::uniform(t.x_alphabet().clone(), t.y_alphabet().clone())
}

/// Sender's pair uniform on {00, 11} (so `y' = y''`), receiver's bit
/// uniform and independent.
pub fn masked_and_swapped_correlated() -> JointDistribution {
    let t = masked_and_swapped();
    let px = [ratio(1, 2), ratio(0, 1), ratio(0, 1), ratio(1, 2)];
    let py = [ratio(1, 2), ratio(1, 2)];
    JointDistribution::product(t.x_alphabet().clone(), &px, t.y_alphabet().clone(), &py)
        .expect("fixture is consistent")
}
