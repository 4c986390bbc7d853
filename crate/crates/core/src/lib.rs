//! Quantum measurement toolkit: projective and generalized measurements,
//! Kraus decompositions, unambiguous discrimination of two pure states,
//! Neumark dilation of a POVM to a PVM, and ancilla-based realization of a
//! POVM by a joint unitary and a local projective measurement.
//!
//! All values are immutable once constructed and every operation is a pure
//! function of its inputs; randomness is always driven by an explicit seed.

pub mod ancilla;
pub mod discrimination;
pub mod error;
pub mod linalg;
pub mod measurement;
pub mod neumark;
pub mod random;
pub mod states;

pub use error::{Error, Result, SetViolation};
pub use linalg::{ComplexMatrix, Tolerance};
pub use measurement::{KrausSet, Outcome, OutcomeDistribution, PovmSet, PvmSet};
pub use num_complex::Complex64;
pub use states::{DensityMatrix, PureState};
