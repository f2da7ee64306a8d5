//! Convention-free reference propagator.
//!
//! Integrates the Schrödinger equation for the evolution operator,
//! `i U'(t) = H(t) U(t)` with `U(0) = I`, by the exponential midpoint
//! rule: each short step multiplies by `expm(-i H(t + h/2) h)`.  Every
//! step factor is unitary up to matrix-exponential rounding, so unitarity
//! cannot drift and contaminate comparisons.  The step count per grid
//! interval is doubled until two successive refinements agree at every
//! grid point, which makes the result an independent arbiter for the
//! product-of-exponentials engine: the two share no code path beyond the
//! matrix exponential itself.

use crate::error::Error;
use crate::linalg::{c64, expm, ComplexMatrix};
use crate::tol;
use crate::Result;

/// Converged brute-force propagation result.
#[derive(Debug, Clone)]
pub struct DirectPropagation {
    pub grid: Vec<f64>,
    pub samples: Vec<ComplexMatrix>,
    /// Midpoint-rule steps per grid interval at convergence.
    pub substeps_per_interval: usize,
    /// Whole-grid deviation between the last two refinements.
    pub last_refinement_delta: f64,
}

/// Largest step count tried before declaring non-convergence.
const MAX_SUBSTEPS: usize = 1 << 20;

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Solver(
            "propagation grid needs at least two points".into(),
        ));
    }
    if grid[0] != 0.0 {
        return Err(Error::Solver(format!(
            "propagation grid must start at 0, got {}",
            grid[0]
        )));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Solver(
            "propagation grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Propagate with a fixed number of midpoint-exponential substeps per grid
/// interval.  The Hamiltonian is checked for Hermiticity at every midpoint.
pub fn propagate_fixed(
    h: &dyn Fn(f64) -> ComplexMatrix,
    grid: &[f64],
    substeps: usize,
) -> Result<Vec<ComplexMatrix>> {
    validate_grid(grid)?;
    assert!(substeps >= 1, "substeps must be positive");
    let dim = h(grid[0]).dim();
    let mut u = ComplexMatrix::identity(dim);
    let mut samples = Vec::with_capacity(grid.len());
    samples.push(u.clone());
    for w in grid.windows(2) {
        let dt = (w[1] - w[0]) / substeps as f64;
        for s in 0..substeps {
            let t_mid = w[0] + (s as f64 + 0.5) * dt;
            let ham = h(t_mid);
            let defect = ham.hermiticity_defect();
            let scale = 1.0 + ham.frobenius_norm();
            if defect > tol::HERMITICITY * scale {
                return Err(Error::NotHermitian {
                    defect,
                    tol: tol::HERMITICITY * scale,
                });
            }
            let step = expm(&ham.scale(c64(0.0, -dt)))?;
            u = &step * &u;
        }
        samples.push(u.clone());
    }
    Ok(samples)
}

/// Propagate to convergence: substeps per interval double until two
/// successive refinements differ by less than `tol` in Frobenius norm at
/// every grid point (a whole-grid guarantee, not per-point).
pub fn propagate_direct(
    h: &dyn Fn(f64) -> ComplexMatrix,
    grid: &[f64],
    tol: f64,
) -> Result<DirectPropagation> {
    validate_grid(grid)?;
    let mut substeps = 1usize;
    let mut prev = propagate_fixed(h, grid, substeps)?;
    loop {
        let next_substeps = substeps * 2;
        let cur = propagate_fixed(h, grid, next_substeps)?;
        let delta = prev
            .iter()
            .zip(cur.iter())
            .map(|(a, b)| (a - b).frobenius_norm())
            .fold(0.0, f64::max);
        if delta < tol {
            return Ok(DirectPropagation {
                grid: grid.to_vec(),
                samples: cur,
                substeps_per_interval: next_substeps,
                last_refinement_delta: delta,
            });
        }
        if next_substeps >= MAX_SUBSTEPS {
            return Err(Error::OracleConvergence(format!(
                "midpoint propagator did not reach tolerance {tol} at {next_substeps} \
                 substeps per interval (last refinement changed by {delta:.3e})"
            )));
        }
        substeps = next_substeps;
        prev = cur;
    }
}

/// Maximum Frobenius deviation between two sampled propagations and the
/// grid time where it occurs.  The grids must be identical.
pub fn compare_propagators(
    a: (&[f64], &[ComplexMatrix]),
    b: (&[f64], &[ComplexMatrix]),
) -> Result<(f64, f64)> {
    let (grid_a, samples_a) = a;
    let (grid_b, samples_b) = b;
    if grid_a.len() != grid_b.len() || grid_a.iter().zip(grid_b).any(|(x, y)| x != y) {
        return Err(Error::Solver(
            "propagator comparison requires identical grids".into(),
        ));
    }
    if samples_a.len() != grid_a.len() || samples_b.len() != grid_b.len() {
        return Err(Error::Solver(
            "sample count does not match grid length".into(),
        ));
    }
    let mut max_dev = f64::NEG_INFINITY;
    let mut argmax_t = grid_a[0];
    for ((t, ua), ub) in grid_a.iter().zip(samples_a).zip(samples_b) {
        let dev = (ua - ub).frobenius_norm();
        if dev > max_dev {
            max_dev = dev;
            argmax_t = *t;
        }
    }
    Ok((max_dev, argmax_t))
}

/// Largest unitarity defect over a set of samples.
pub fn max_unitarity_defect(samples: &[ComplexMatrix]) -> f64 {
    samples
        .iter()
        .map(|u| u.unitarity_defect())
        .fold(0.0, f64::max)
}
