//! Domain types shared by every analysis: alphabets, function tables, exact
//! input distributions and rectangles.

mod alphabet;
pub mod block;
mod distribution;
pub(crate) mod json;
pub mod rational;
mod rect;
mod table;
mod triple;

pub use alphabet::Alphabet;
pub(crate) use distribution::{block_cells, rational_rows};
pub use distribution::{parse_distribution, JointDistribution};
pub use rational::Rational;
pub use rect::SubRect;
pub use table::{ValueId, ValueTable};
pub use triple::{parse_triple, FunctionTriple};
