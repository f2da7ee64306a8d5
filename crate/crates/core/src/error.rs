//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the library.
///
/// Variants are grouped by origin: shape/validation problems with inputs,
/// algebraic checks that fail, numerical solvers that cannot meet their
/// tolerance, and I/O or configuration problems in the scenario runner.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimensions incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix required to be Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian (defect {defect:.3e}, tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    /// A density matrix failed validation (trace, Hermiticity, positivity).
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    /// An operator could not be expanded in the su(4) basis within tolerance.
    #[error("basis expansion residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ExpansionResidual { residual: f64, tol: f64 },

    /// A commutator coefficient fell outside the structure-constant set.
    #[error(
        "commutator [O_{i}, O_{j}] has coefficient ({re:.3e}, {im:.3e}) outside the expected set"
    )]
    UnexpectedCoefficient {
        i: usize,
        j: usize,
        re: f64,
        im: f64,
    },

    /// A sub-algebra or span-level check failed structurally.
    #[error("algebra: {0}")]
    Algebra(String),

    /// An ODE solver could not reach its tolerance before the step underflowed.
    #[error("solver step underflow at t = {t:.6e}: tolerance not achievable")]
    StepUnderflow { t: f64 },

    /// An ODE solver exceeded its step budget.
    #[error("solver exceeded {max_steps} steps at t = {t:.6e}")]
    StepBudgetExceeded { t: f64, max_steps: usize },

    /// Generic solver-level failure (bad spans, empty grids, stalled segmentation).
    #[error("solver: {0}")]
    Solver(String),

    /// The brute-force propagator failed to converge under refinement.
    #[error("cross-check propagator did not converge: {0}")]
    OracleConvergence(String),

    /// Invalid scenario configuration.
    #[error("config: {0}")]
    Config(String),

    /// Filesystem problems while writing or reading scenario outputs.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    ///
    /// Configuration problems exit 2; everything else that aborts a run
    /// exits 3.  (Exit 1 is reserved for runs that complete but fail a
    /// verification or accuracy gate.)
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            _ => 3,
        }
    }
}
