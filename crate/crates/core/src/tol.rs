//! Shared numerical thresholds.
//!
//! Every tolerance that appears in a public contract is named here once so
//! that library code, tests, and the scenario runner agree on the numbers.

/// Commutator coefficients are snapped to {0, ±i, ±i/4} within this window.
pub const COEFF_SNAP: f64 = 1e-9;

/// Residual allowed when expanding a 4x4 operator in the su(4) basis.
pub const EXPANSION_RESIDUAL: f64 = 1e-12;

/// Rank / span-membership threshold used by sub-algebra closure checks.
pub const SPAN_RANK: f64 = 1e-8;

/// Gram matrices of generator sets must have smallest eigenvalue above this.
pub const GRAM_NONSINGULAR: f64 = 1e-10;

/// Relative Hermiticity defect allowed for Hamiltonian samples.
pub const HERMITICITY: f64 = 1e-12;

/// Relative accuracy target of the scaling-and-squaring matrix exponential.
pub const EXPM_RELATIVE: f64 = 1e-12;

/// Eigendecomposition must reconstruct its input to this relative accuracy.
pub const EIG_RECONSTRUCTION: f64 = 1e-10;

/// Default relative/absolute tolerance of the adaptive ODE solver.
pub const SOLVER_TOL_DEFAULT: f64 = 1e-10;

/// |mu_plus| (or |nu_plus|) beyond which a Riccati solution is declared
/// singular and the evolution is segmented.
pub const BLOWUP_THRESHOLD: f64 = 1e6;

/// Default convergence target for the brute-force cross-check propagator.
pub const ORACLE_TOL_DEFAULT: f64 = 1e-7;

/// Unitarity defect allowed for the cross-check propagator itself.
pub const ORACLE_UNITARITY: f64 = 1e-10;

/// A scenario report flags failure when the evolution deviates from the
/// brute-force propagator by more than this anywhere on the grid.
pub const DEVIATION_FLAG: f64 = 1e-5;

/// Floor (slightly below zero) for eigenvalues of a valid density matrix,
/// absorbing round-off from evolution and damping.
pub const DENSITY_EIG_FLOOR: f64 = -1e-9;

/// Density matrices must be Hermitian and unit-trace within this.
pub const DENSITY_VALIDATION: f64 = 1e-10;
