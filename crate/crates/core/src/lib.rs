//! Largest C-eigenvalue of piezoelectric-type tensors and perturbation
//! intervals for it.
//!
//! A piezoelectric-type tensor `A` is a real `n × n × n` tensor with
//! `a_ijk = a_ikj`. Its largest C-eigenvalue is
//! `max { x A y y : ‖x‖ = ‖y‖ = 1 }`. This crate computes it through the
//! symmetric fourth-order lifting `S_A` (whose largest Z-eigenvalue is its
//! square), bounds how far it moves under a perturbation `A + E`, and runs
//! seeded perturbation experiments.
//!
//! ```
//! use ceig::{spectral, PiezoTensor, SolverConfig};
//!
//! let a = PiezoTensor::from_entries(3, &[((0, 0, 0), 2.0)]).unwrap();
//! let pair = spectral::c_max_via_lift(&a, &SolverConfig::default()).unwrap();
//! assert!((pair.lambda - 2.0).abs() < 1e-12);
//! ```

pub mod bounds;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod spectral;
pub mod tensor;

pub use bounds::{BoundReport, Interval};
pub use error::{Error, Result};
pub use spectral::{CEigenpair, Shift, SolverConfig, ZEigenpair};
pub use tensor::{PiezoTensor, SymTensor4, SymmetryMode};
