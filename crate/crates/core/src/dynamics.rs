//! Density-matrix evolution, the 15-component coherence vector, the
//! uniform-damping decoherence model, and von Neumann entropy.
//!
//! A four-level density matrix is equivalent to a real 15-vector η of
//! weighted diagonal differences and off-diagonal combinations (the
//! trace carries no information).  Uniform damping multiplies η by
//! `exp(-Γt)`, which is the same as contracting ρ affinely toward the
//! maximally mixed state — the special case of Lindblad dissipation in
//! which every basis operator damps at a common rate.

use crate::error::Error;
use crate::linalg::{c64, eig_hermitian, ComplexMatrix};
use crate::tol;
use crate::Result;

/// Off-diagonal index pairs (1-based), in the canonical η ordering.
pub(crate) const PAIRS: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];

/// A validated 4×4 density matrix: Hermitian, unit trace, nonnegative
/// spectrum (within tolerances).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and wrap a 4×4 matrix as a density matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::InvalidDensityMatrix(format!(
                "expected a 4x4 matrix, got {0}x{0}",
                mat.dim()
            )));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol::DENSITY_VALIDATION {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian: defect {defect:.3e}"
            )));
        }
        let tr = mat.trace();
        if (tr - c64(1.0, 0.0)).norm() > tol::DENSITY_VALIDATION {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace is {tr}, expected 1"
            )));
        }
        let (eigs, _) = eig_hermitian(&mat)?;
        if let Some(lambda) = eigs.iter().find(|&&l| l < tol::DENSITY_EIG_FLOOR) {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {lambda:.3e}"
            )));
        }
        Ok(Self { mat })
    }

    /// The pure state concentrated on basis level `i` (1-based, 1..=4).
    pub fn basis_state(i: usize) -> Result<Self> {
        if !(1..=4).contains(&i) {
            return Err(Error::InvalidDensityMatrix(format!(
                "basis state index must be 1..=4, got {i}"
            )));
        }
        let mut mat = ComplexMatrix::zeros(4);
        mat[(i - 1, i - 1)] = c64(1.0, 0.0);
        Ok(Self { mat })
    }

    /// The underlying matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Wrap without validation, for results that are valid by construction
    /// (unitary conjugation of a valid state, contraction toward I/4).
    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }
}

/// The 15 real coherence components of a four-level density matrix, in
/// canonical order: three weighted diagonal differences, then
/// `(ρ_ij + ρ_ji, i(ρ_ij − ρ_ji))` for each pair in [`PAIRS`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceVector(pub [f64; 15]);

/// Map a density matrix to its coherence vector.
pub fn rho_to_eta(rho: &DensityMatrix) -> CoherenceVector {
    let m = rho.matrix();
    let r = |i: usize, j: usize| m[(i - 1, j - 1)];
    let mut eta = [0.0; 15];
    eta[0] = (r(1, 1) - r(2, 2)).re;
    eta[1] = (r(1, 1) + r(2, 2) - r(3, 3) * 2.0).re / 3f64.sqrt();
    eta[2] = (r(1, 1) + r(2, 2) + r(3, 3) - r(4, 4) * 3.0).re / 6f64.sqrt();
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        let sum = r(i, j) + r(j, i);
        let diff = c64(0.0, 1.0) * (r(i, j) - r(j, i));
        eta[3 + 2 * p] = sum.re;
        eta[4 + 2 * p] = diff.re;
    }
    CoherenceVector(eta)
}

/// Reconstruct the unique unit-trace Hermitian matrix with the given
/// coherence components (the inverse of [`rho_to_eta`]).
///
/// The result is Hermitian with trace exactly 1 by construction; its
/// spectrum is nonnegative whenever η came from an actual state, as every
/// η produced by this crate's evolution and damping paths does.
pub fn eta_to_rho(eta: &CoherenceVector) -> DensityMatrix {
    let e = &eta.0;
    let a = e[0];
    let b = e[1] * 3f64.sqrt();
    let c = e[2] * 6f64.sqrt();
    // Solve the triangular system of diagonal constraints together with
    // unit trace: with s = ρ11 + ρ22,
    //   ρ11 − ρ22 = a,  ρ11 + ρ22 − 2ρ33 = b,  ρ11 + ρ22 + ρ33 − 3ρ44 = c.
    let s = (1.0 + 2.0 / 3.0 * b + c / 3.0) / 2.0;
    let d1 = (s + a) / 2.0;
    let d2 = (s - a) / 2.0;
    let d3 = (s - b) / 2.0;
    let d4 = (s + d3 - c) / 3.0;
    let mut mat = ComplexMatrix::zeros(4);
    for (i, d) in [d1, d2, d3, d4].into_iter().enumerate() {
        mat[(i, i)] = c64(d, 0.0);
    }
    for (p, &(i, j)) in PAIRS.iter().enumerate() {
        let re = e[3 + 2 * p] / 2.0;
        let im = -e[4 + 2 * p] / 2.0;
        mat[(i - 1, j - 1)] = c64(re, im);
        mat[(j - 1, i - 1)] = c64(re, -im);
    }
    DensityMatrix::from_trusted(mat)
}

/// Conjugate the initial state through each evolution sample:
/// `ρ(t) = U(t) ρ0 U†(t)`.
pub fn evolve_density(samples: &[ComplexMatrix], rho0: &DensityMatrix) -> Vec<DensityMatrix> {
    samples
        .iter()
        .map(|u| DensityMatrix::from_trusted(&(u * rho0.matrix()) * &u.adjoint()))
        .collect()
}

/// Apply uniform coherence damping at rate `gamma ≥ 0` to state samples
/// taken at times `ts`: every coherence component shrinks by `exp(-γ t)`,
/// equivalently `ρ_γ(t) = I/4 + exp(-γt) (ρ(t) − I/4)`.
pub fn apply_uniform_damping(
    ts: &[f64],
    rhos: &[DensityMatrix],
    gamma: f64,
) -> Result<Vec<DensityMatrix>> {
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::Config(format!(
            "damping rate must be finite and nonnegative, got {gamma}"
        )));
    }
    if ts.len() != rhos.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} sample times vs {} states",
            ts.len(),
            rhos.len()
        )));
    }
    let quarter = ComplexMatrix::identity(4).scale(c64(0.25, 0.0));
    Ok(ts
        .iter()
        .zip(rhos)
        .map(|(&t, rho)| {
            let factor = (-gamma * t).exp();
            let contracted = &quarter + &(rho.matrix() - &quarter).scale(c64(factor, 0.0));
            DensityMatrix::from_trusted(contracted)
        })
        .collect())
}

/// Von Neumann entropy in nats, `S = −Σ λ ln λ`, with eigenvalues clipped
/// at zero from below and `0·ln 0 := 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let (eigs, _) = eig_hermitian(rho.matrix())
        .expect("a validated density matrix is Hermitian within the eigensolver guard");
    eigs.iter()
        .map(|&l| {
            let l = l.max(0.0);
            if l == 0.0 {
                0.0
            } else {
                -l * l.ln()
            }
        })
        .sum()
}

/// Purity `Tr(ρ²)`, 1 for pure states and 1/4 for the maximally mixed
/// four-level state.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    (m * m).trace().re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, eig_hermitian};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_density(rng: &mut impl Rng) -> DensityMatrix {
        // A A† / tr(A A†) is a valid density matrix for any nonzero A.
        let a = ComplexMatrix::from_fn(4, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let m = &a * &a.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale(c64(1.0 / tr, 0.0))).unwrap()
    }

    #[test]
    fn coherence_vector_of_the_ground_state() {
        let rho = DensityMatrix::basis_state(1).unwrap();
        let eta = rho_to_eta(&rho);
        assert!((eta.0[0] - 1.0).abs() < 1e-15);
        assert!((eta.0[1] - 1.0 / 3.0f64.sqrt()).abs() < 1e-15);
        assert!((eta.0[2] - 1.0 / 6.0f64.sqrt()).abs() < 1e-15);
        for v in &eta.0[3..] {
            assert!(v.abs() < 1e-15);
        }
    }

    #[test]
    fn coherence_round_trip_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let rho = random_density(&mut rng);
            let back = eta_to_rho(&rho_to_eta(&rho));
            let dev = (back.matrix() - rho.matrix()).max_abs();
            assert!(dev < 1e-12, "round-trip deviation {dev:.3e}");
        }
    }

    #[test]
    fn halved_coherence_vector_has_known_spectrum() {
        // Scaling the coherence vector of a pure state by 1/2 mixes the
        // spectrum to (5/8, 1/8, 1/8, 1/8).
        let mut eta = rho_to_eta(&DensityMatrix::basis_state(2).unwrap());
        for v in &mut eta.0 {
            *v *= 0.5;
        }
        let rho = eta_to_rho(&eta);
        let (w, _) = eig_hermitian(rho.matrix()).unwrap();
        let want = [0.125, 0.125, 0.125, 0.625];
        for (got, want) in w.iter().zip(want) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_damping_contracts_toward_maximal_mixing() {
        let rho0 = DensityMatrix::basis_state(3).unwrap();
        let gamma = 0.5;
        let ts = [0.0, 1.0, 4.0];
        let rhos = vec![rho0.clone(), rho0.clone(), rho0.clone()];
        let damped = apply_uniform_damping(&ts, &rhos, gamma).unwrap();
        for (&t, rho) in ts.iter().zip(&damped) {
            // Spectrum of the damped pure state: 1/4 + 3x/4 once and
            // 1/4 - x/4 three times, with x = e^{-γt}.
            let x = (-gamma * t).exp();
            let (w, _) = eig_hermitian(rho.matrix()).unwrap();
            assert!((w[3] - (0.25 + 0.75 * x)).abs() < 1e-12);
            for &small in &w[..3] {
                assert!((small - (0.25 - 0.25 * x)).abs() < 1e-12);
            }
            // Diagonals stay within the universal contraction envelope.
            for i in 0..4 {
                let d = rho.matrix()[(i, i)].re;
                assert!((d - 0.25).abs() <= x + 1e-12);
            }
        }
        // γ = 0 leaves the state untouched.
        let undamped = apply_uniform_damping(&ts, &rhos, 0.0).unwrap();
        for (orig, got) in rhos.iter().zip(&undamped) {
            assert!((orig.matrix() - got.matrix()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn damping_is_equivalent_to_scaling_the_coherence_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rho = random_density(&mut rng);
        let gamma = 0.8;
        let t = 1.7;
        let damped = apply_uniform_damping(&[t], std::slice::from_ref(&rho), gamma).unwrap();
        let mut eta = rho_to_eta(&rho);
        let x = (-gamma * t).exp();
        for v in &mut eta.0 {
            *v *= x;
        }
        let via_eta = eta_to_rho(&eta);
        assert!((damped[0].matrix() - via_eta.matrix()).max_abs() < 1e-14);
    }

    #[test]
    fn damping_validates_inputs() {
        let rho = DensityMatrix::basis_state(1).unwrap();
        assert!(apply_uniform_damping(&[0.0], std::slice::from_ref(&rho), -0.1).is_err());
        assert!(apply_uniform_damping(&[0.0], std::slice::from_ref(&rho), f64::NAN).is_err());
        assert!(apply_uniform_damping(&[0.0, 1.0], &[rho], 0.5).is_err());
    }

    #[test]
    fn entropy_runs_from_zero_to_ln4() {
        let pure = DensityMatrix::basis_state(4).unwrap();
        assert!(von_neumann_entropy(&pure).abs() < 1e-12);
        assert!((purity(&pure) - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::new(ComplexMatrix::identity(4).scale(c64(0.25, 0.0))).unwrap();
        assert!((von_neumann_entropy(&mixed) - 4.0f64.ln()).abs() < 1e-12);
        assert!((purity(&mixed) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn entropy_grows_monotonically_under_damping() {
        let rho0 = DensityMatrix::basis_state(1).unwrap();
        let ts: Vec<f64> = (0..200).map(|i| 0.05 * f64::from(i)).collect();
        let rhos = vec![rho0; ts.len()];
        let damped = apply_uniform_damping(&ts, &rhos, 0.5).unwrap();
        let entropies: Vec<f64> = damped.iter().map(von_neumann_entropy).collect();
        for pair in entropies.windows(2) {
            assert!(pair[1] >= pair[0] - 1e-12);
        }
        // Closed form for the damped pure state:
        // S(x) = -(1/4+3x/4) ln(1/4+3x/4) - 3 (1/4-x/4) ln(1/4-x/4).
        for (&t, &s) in ts.iter().zip(&entropies).skip(1) {
            let x = (-0.5 * t).exp();
            let big = 0.25 + 0.75 * x;
            let small = 0.25 - 0.25 * x;
            let want = -big * big.ln() - 3.0 * small * small.ln();
            assert!((s - want).abs() < 1e-10, "entropy at t = {t}");
        }
        assert!((entropies.last().unwrap() - 4.0f64.ln()).abs() < 0.05);
    }

    #[test]
    fn unitary_evolution_preserves_spectrum_and_purity() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let rho0 = random_density(&mut rng);
        // A concrete unitary: the exponential of a random Hermitian matrix.
        let a = ComplexMatrix::from_fn(4, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = (&a + &a.adjoint()).scale(c64(0.5, 0.0));
        let u = crate::linalg::expm(&h.scale(c64(0.0, -1.0))).unwrap();
        let evolved = evolve_density(&[u], &rho0);
        assert_eq!(evolved.len(), 1);
        let (w0, _) = eig_hermitian(rho0.matrix()).unwrap();
        let (w1, _) = eig_hermitian(evolved[0].matrix()).unwrap();
        for (a, b) in w0.iter().zip(&w1) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!((purity(&rho0) - purity(&evolved[0])).abs() < 1e-8);
    }

    #[test]
    fn density_validation_rejects_malformed_matrices() {
        // Trace != 1.
        assert!(DensityMatrix::new(ComplexMatrix::identity(4)).is_err());
        // Not Hermitian.
        let mut m = ComplexMatrix::zeros(4);
        m[(0, 0)] = c64(1.0, 0.0);
        m[(0, 1)] = c64(0.3, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        // Negative eigenvalue.
        let mut neg = ComplexMatrix::zeros(4);
        neg[(0, 0)] = c64(1.5, 0.0);
        neg[(1, 1)] = c64(-0.5, 0.0);
        assert!(DensityMatrix::new(neg).is_err());
        // Wrong dimension.
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        assert!(DensityMatrix::basis_state(0).is_err());
        assert!(DensityMatrix::basis_state(5).is_err());
    }
}
