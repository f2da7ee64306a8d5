//! Unitary integration of driven four-level (two-qubit) quantum systems.
//!
//! The library factors the time evolution operator of a time-dependent
//! two-qubit Hamiltonian into an ordered product of exponentials whose
//! scalar arguments obey one Riccati equation plus quadratures per
//! dynamically-coupled sector.  Alongside the integrator it provides:
//!
//! - the su(4) operator basis used throughout, with its full commutator
//!   table and machinery to verify the table against a frozen reference
//!   ([`algebra`]);
//! - sub-algebra tooling: closure tests, the zero-pattern seven-element
//!   sub-algebras, the Bell-basis similarity transform, pseudo-spin
//!   operators, and so(n) generator families ([`algebra`], [`algebra::son`]);
//! - the driven Josephson-junction two-qubit model that serves as the
//!   worked example ([`model`]);
//! - the Riccati/quadrature reduction in three formulations, product
//!   assembly, and automatic segmentation across Riccati blow-ups
//!   ([`integrator`]);
//! - a brute-force time-ordered propagator used as an independent
//!   cross-check ([`oracle`]);
//! - density-matrix evolution, the coherence-vector map, a uniform
//!   damping model, and von Neumann entropy ([`dynamics`]);
//! - a scenario runner behind the `unitint` binary ([`cli`]).
//!
//! Dense 4x4 complex linear algebra (exponentials, eigensolver) is
//! self-contained in [`linalg`]; shared numerical thresholds live in
//! [`tol`].

pub mod algebra;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod tol;

pub use error::Error;
pub use linalg::{ComplexMatrix, C64};

/// Convenience alias used by every fallible operation in the crate.
pub type Result<T> = std::result::Result<T, Error>;
