//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! The complex pivot is reduced to a real rotation by factoring out the
//! phase of the off-diagonal entry; each rotation annihilates one pair of
//! off-diagonal entries exactly.  Sweeps run in a fixed order, so results
//! are bit-for-bit deterministic for a given input.  Matrices in this crate
//! are at most 16x16, where Jacobi is both simple and highly accurate.

use super::{ComplexMatrix, C64};
use crate::error::Error;
use crate::Result;

const MAX_SWEEPS: usize = 60;

/// Off-diagonal Frobenius norm.
fn off_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order and a unitary matrix whose
/// columns are the matching eigenvectors, so that `a = V diag(w) V^dagger`
/// up to [`crate::tol::EIG_RECONSTRUCTION`] relative to `||a||_F`.
/// Errors when `a` is not Hermitian within a small relative defect.
pub fn eig_hermitian(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.dim();
    let scale = a.frobenius_norm();
    let defect = a.hermiticity_defect();
    if defect > 1e-9 * (1.0 + scale) {
        return Err(Error::NotHermitian {
            defect,
            tol: 1e-9 * (1.0 + scale),
        });
    }

    // Work on the Hermitian part to keep the iteration exactly self-adjoint.
    let mut m = ComplexMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let target = f64::EPSILON * (1.0 + scale);

    for _sweep in 0..MAX_SWEEPS {
        if off_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let beta = m[(p, q)];
                let beta_mag = beta.norm();
                if beta_mag <= f64::EPSILON * (1.0 + scale) * 1e-3 {
                    continue;
                }
                let phase = beta / beta_mag; // e^{i phi}
                let alpha = m[(p, p)].re;
                let gamma = m[(q, q)].re;
                // Small-magnitude root of t^2 - 2 zeta t - 1 = 0, evaluated
                // in the cancellation-free form.
                let zeta = (gamma - alpha) / (2.0 * beta_mag);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = -sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotation R: R[p,p]=c, R[p,q]=-s*phase, R[q,p]=s*conj(phase), R[q,q]=c.
                let s_ph = phase * s; // s e^{i phi}
                let s_ph_conj = phase.conj() * s; // s e^{-i phi}

                // Column update  M <- M R,  V <- V R.
                for r in 0..n {
                    let mp = m[(r, p)];
                    let mq = m[(r, q)];
                    m[(r, p)] = mp * c + mq * s_ph_conj;
                    m[(r, q)] = mq * c - mp * s_ph;
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * c + vq * s_ph_conj;
                    v[(r, q)] = vq * c - vp * s_ph;
                }
                // Row update  M <- R^dagger M.
                for col in 0..n {
                    let mp = m[(p, col)];
                    let mq = m[(q, col)];
                    m[(p, col)] = mp * c + mq * s_ph;
                    m[(q, col)] = mq * c - mp * s_ph_conj;
                }
                // Annihilate the pivot pair exactly instead of leaving round-off.
                m[(p, q)] = C64::new(0.0, 0.0);
                m[(q, p)] = C64::new(0.0, 0.0);
            }
        }
    }

    // Sort ascending, carrying eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, cidx| v[(r, order[cidx])]);
    Ok((eigenvalues, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
        let a = ComplexMatrix::from_fn(dim, |_, _| {
            c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let h = &a + &a.adjoint();
        h.scale(c64(0.5, 0.0))
    }

    /// V diag(w) V† must reconstruct the input.
    fn reconstruction_defect(a: &ComplexMatrix, w: &[f64], v: &ComplexMatrix) -> f64 {
        let n = a.dim();
        let d = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                c64(w[i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        (&(&(v * &d) * &v.adjoint()) - a).max_abs()
    }

    #[test]
    fn diagonal_matrix_eigenvalues_sorted() {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                c64([3.0, -1.0, 2.0, 0.5][i], 0.0)
            } else {
                c64(0.0, 0.0)
            }
        });
        let (w, v) = eig_hermitian(&a).unwrap();
        assert_eq!(w.len(), 4);
        assert!(w.windows(2).all(|p| p[0] <= p[1]));
        assert!((w[0] - (-1.0)).abs() < 1e-14);
        assert!((w[3] - 3.0).abs() < 1e-14);
        assert!(reconstruction_defect(&a, &w, &v) < 1e-14);
    }

    #[test]
    fn pauli_x_tensor_identity_spectrum() {
        // σ_x ⊗ I has eigenvalues ±1, each twice.
        let sx =
            ComplexMatrix::from_fn(2, |i, j| if i != j { c64(1.0, 0.0) } else { c64(0.0, 0.0) });
        let a = sx.kron(&ComplexMatrix::identity(2));
        let (w, _) = eig_hermitian(&a).unwrap();
        let expected = [-1.0, -1.0, 1.0, 1.0];
        for (got, want) in w.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut a = ComplexMatrix::identity(3);
        a[(0, 1)] = c64(0.5, 0.0); // no matching conjugate below the diagonal
        assert!(eig_hermitian(&a).is_err());
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_hermitian(&mut rng, 6);
        let (_, v) = eig_hermitian(&a).unwrap();
        assert!(v.unitarity_defect() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reconstructs_random_hermitian(seed in 0u64..u64::MAX) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dim = rng.gen_range(2usize..=6);
            let a = random_hermitian(&mut rng, dim);
            let (w, v) = eig_hermitian(&a).unwrap();
            prop_assert!(w.windows(2).all(|p| p[0] <= p[1]));
            prop_assert!(reconstruction_defect(&a, &w, &v) < 1e-10);
            prop_assert!(v.unitarity_defect() < 1e-10);
        }
    }
}
