//! Reversible-computation toolkit.
//!
//! * [`revcirc`]: classical reversible circuits, out-of-place Bennett
//!   embedding of boolean programs, the reverse pass and the tidy pass.
//! * [`linalg`], [`qsim`]: dense complex linear algebra and the computation
//!   unitary built from a branch mapping.
//! * [`tidy`]: decides whether a quantum branch mapping can be tidied, builds
//!   the tidying unitaries when it can and certifies impossibility when it
//!   cannot.
//! * [`report`], [`cli`]: analyzer reports and the `revtidy` front end.

pub mod cli;
pub mod linalg;
pub mod qsim;
pub mod report;
pub mod revcirc;
pub mod tidy;

pub use linalg::{ComplexScalar, StateVector, UnitaryMatrix, DEFAULT_TOLERANCE};
pub use qsim::{Branch, ComputationSpec, RegisterLayout};
pub use revcirc::{Bits, BooleanProgram, Gate, ReversibleCircuit, Role};
