//! Two-party secure computation with function-level privacy.
//!
//! Alice holds `x`, Bob holds `y`, and both want `f(x, y)` while Alice learns
//! nothing extra about `g(x, y)` and Bob nothing extra about `h(x, y)`. This
//! crate decides which triples `(f, g, h)` admit such a protocol, builds the
//! protocol when one exists, returns a forbidden sub-rectangle when none
//! does, and checks privacy and eavesdropper leakage exactly over rational
//! probabilities.
//!
//! * [`model`]: alphabets, function tables, exact input distributions.
//! * [`characterize`]: the decision procedure and protocol synthesis.
//! * [`protocol`]: protocol trees, execution and transcript laws.
//! * [`privacy`]: correctness, transcript privacy, and conditional
//!   mutual information audits.
//! * [`noninteractive`]: one-message perfect security conditions.
//! * [`eavesdrop`]: leakage to an eavesdropper for block protocols.
//! * [`sim`]: a seeded two-party message-passing simulator.

pub mod characterize;
pub mod eavesdrop;
mod error;
pub mod fixtures;
pub mod info;
mod limits;
pub mod model;
pub mod noninteractive;
pub mod privacy;
pub mod protocol;
pub mod sim;

pub use error::{Error, Result};
pub use limits::Limits;
