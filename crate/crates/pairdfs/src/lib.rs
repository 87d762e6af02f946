//! Simulator and operator-algebra toolkit for paired-qubit
//! decoherence-free encodings.
//!
//! The crate builds qubit-boson coupling models (pure-dephasing pair
//! couplings with a strength-mismatch knob, the general coupling they
//! specialize, and mistunable cancellation drives), constructs the
//! null-eigenspace pair code and the four-qubit singlet code, evolves
//! joint states exactly by spectral propagation, and certifies the
//! algebraic gate constraints (shift residuals, trace obstructions,
//! commutants, code preservation) numerically.
//!
//! All operations are pure functions over immutable values and can run
//! concurrently.

pub mod codec;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod model;
pub mod sample;

pub use error::{Error, Result};
pub use linalg::{CMat, CVec, SystemLayout};
