//! Entropic measurement-uncertainty and disturbance relations.
//!
//! The crate evaluates, for projective measurements on a (possibly
//! memory-assisted) quantum state, the exact link between a measurement's
//! uncertainty and its relative-entropy disturbance, the M-M / M-D / D-D
//! inequalities for measurement pairs, and their multi-measurement
//! generalizations. Every relation comes back as a [`RelationReport`] so
//! callers can check it numerically.
//!
//! Module map:
//! - [`linalg`]: small dense complex matrices, Jacobi eigensolver, spectral log
//! - [`qstate`]: validated density matrices and the named state families
//! - [`measure`]: projective measurements, outcome distributions, dephasing
//! - [`entropy`]: von Neumann / Shannon / conditional / relative entropy, overlaps
//! - [`relations`]: identities and inequalities as reports
//! - [`analytic`]: closed-form curves for the Werner and Bloch examples
//! - [`exec`]: order-preserving parallel batch evaluation

pub mod analytic;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod measure;
pub mod qstate;
pub mod relations;
pub mod sampling;

pub use entropy::Bits;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum};
pub use measure::{OutcomeDistribution, ProjectiveMeasurement};
pub use qstate::{BlochParams, DensityMatrix, WernerParams};
pub use relations::{RelationKind, RelationReport, SplitSpec};
