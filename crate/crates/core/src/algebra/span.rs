//! Trace-inner-product span utilities for sets of matrices.
//!
//! Sub-algebra closure, zero-pattern verification, and triplet/span
//! comparisons all reduce to rank questions about sets of matrices under
//! the Hilbert–Schmidt inner product; this module centralizes that
//! machinery so every caller uses the same thresholds.

use crate::linalg::ComplexMatrix;
use crate::tol;

/// Orthonormal spanning set maintained by modified Gram–Schmidt.
///
/// Elements are unit-norm (Frobenius) and pairwise orthogonal under the
/// Hilbert–Schmidt inner product.  Adding a matrix either absorbs it into
/// the span (returns `false`) or appends a new orthonormal direction.
#[derive(Debug, Default, Clone)]
pub struct OrthoSpan {
    basis: Vec<ComplexMatrix>,
}

impl OrthoSpan {
    /// Empty span.
    pub fn new() -> Self {
        OrthoSpan { basis: Vec::new() }
    }

    /// Current span dimension.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis accumulated so far.
    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Component of `m` orthogonal to the current span.
    ///
    /// Projects twice (classical re-orthogonalization) so the residual is
    /// trustworthy even when `m` lies almost inside the span.
    fn orthogonal_component(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.hs_inner(&r);
                r = &r - &b.scale(coeff);
            }
        }
        r
    }

    /// Relative distance of `m` from the span (0 = inside, 1 = orthogonal).
    pub fn residual(&self, m: &ComplexMatrix) -> f64 {
        let norm = m.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        self.orthogonal_component(m).frobenius_norm() / norm
    }

    /// True when `m` lies in the span within [`tol::SPAN_RANK`].
    pub fn contains(&self, m: &ComplexMatrix) -> bool {
        self.residual(m) <= tol::SPAN_RANK
    }

    /// Add `m` if it is independent of the current span.
    ///
    /// Returns `true` when a new direction was appended.
    pub fn add(&mut self, m: &ComplexMatrix) -> bool {
        let norm = m.frobenius_norm();
        if norm == 0.0 {
            return false;
        }
        let r = self.orthogonal_component(m);
        let rnorm = r.frobenius_norm();
        if rnorm <= tol::SPAN_RANK * norm {
            return false;
        }
        self.basis.push(r.scale((1.0 / rnorm).into()));
        true
    }
}

/// Build an [`OrthoSpan`] from a set of matrices.
pub fn span_of(mats: &[ComplexMatrix]) -> OrthoSpan {
    let mut s = OrthoSpan::new();
    for m in mats {
        s.add(m);
    }
    s
}

/// Symmetric subspace distance between the spans of two sets.
///
/// Maximum over elements of each set of the relative residual against the
/// span of the other set; zero iff the spans coincide (within round-off).
pub fn subspace_distance(a: &[ComplexMatrix], b: &[ComplexMatrix]) -> f64 {
    let sa = span_of(a);
    let sb = span_of(b);
    let mut worst: f64 = 0.0;
    for m in a {
        worst = worst.max(sb.residual(m));
    }
    for m in b {
        worst = worst.max(sa.residual(m));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    fn unit(dim: usize, i: usize, j: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        m[(i, j)] = c64(1.0, 0.0);
        m
    }

    #[test]
    fn span_counts_independent_directions() {
        let e00 = unit(2, 0, 0);
        let e11 = unit(2, 1, 1);
        let sum = &e00 + &e11;
        // Third matrix is a combination of the first two: rank stays 2.
        let span = span_of(&[e00.clone(), e11.clone(), sum.clone()]);
        assert_eq!(span.dim(), 2);
        assert!(span.contains(&sum));
        assert!(!span.contains(&unit(2, 0, 1)));
    }

    #[test]
    fn residual_is_zero_inside_and_full_outside() {
        let span = span_of(&[unit(2, 0, 0)]);
        assert!(span.residual(&unit(2, 0, 0).scale(c64(3.0, -2.0))) < 1e-14);
        let outside = unit(2, 1, 0);
        assert!((span.residual(&outside) - outside.frobenius_norm()).abs() < 1e-14);
    }

    #[test]
    fn subspace_distance_separates_equal_and_orthogonal() {
        let a = [unit(2, 0, 0), unit(2, 1, 1)];
        let b = [&a[0] + &a[1], &a[0] - &a[1]];
        // Same span in a different basis: distance is zero.
        assert!(subspace_distance(&a, &b) < 1e-14);
        // Orthogonal spans: each unit generator misses entirely (distance 1).
        let c = [unit(2, 0, 1), unit(2, 1, 0)];
        assert!((subspace_distance(&a, &c) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn add_rejects_dependent_matrix() {
        let mut span = OrthoSpan::new();
        assert!(span.add(&unit(2, 0, 0)));
        assert!(!span.add(&unit(2, 0, 0).scale(c64(-4.0, 1.0))));
        assert_eq!(span.dim(), 1);
    }
}
