//! so(n) generator families for n-level nearest-neighbor problems.
//!
//! The generator `m_jk` (1-based, j < k) has entries
//! `(m_jk)_pq = (-i)^(k-j-1) * [d_jp d_kq + (-1)^(k-j-1) d_jq d_kp]`:
//! nearest-neighbor pairs give real symmetric matrices with a single 1
//! above and below the diagonal; longer-range pairs alternate imaginary
//! antisymmetric and real symmetric.  All n(n-1)/2 of them close into
//! so(n), and the nearest-neighbor subset alone generates the same
//! algebra.  For n = 4 the set splits into two mutually commuting su(2)
//! triplets found by a sign search.

use super::span::subspace_distance;
use super::{build_operator_basis, is_closed_subalgebra, SubalgebraSpec};
use crate::error::Error;
use crate::linalg::{c64, commutator, ComplexMatrix, C64};
use crate::Result;

/// The generator `m_jk` of so(n), 1-based indices with `j < k <= n`.
pub fn so_generator(n: usize, j: usize, k: usize) -> Result<ComplexMatrix> {
    if !(1..k).contains(&j) || k > n {
        return Err(Error::Algebra(format!(
            "so({n}) generator indices must satisfy 1 <= j < k <= n, got ({j}, {k})"
        )));
    }
    let d = (k - j - 1) as i32;
    let phase = c64(0.0, -1.0).powi(d); // (-i)^(k-j-1)
    let parity = if d % 2 == 0 { 1.0 } else { -1.0 }; // (-1)^(k-j-1)
    let mut m = ComplexMatrix::zeros(n);
    m[(j - 1, k - 1)] = phase;
    m[(k - 1, j - 1)] = phase * parity;
    Ok(m)
}

/// All n(n-1)/2 generators `m_jk`, `1 <= j < k <= n`, in lexicographic order.
///
/// Supported for 3 <= n <= 10.  The returned set is closed under
/// commutation with dimension n(n-1)/2, and so is the Lie closure of just
/// the nearest-neighbor members `m_(j,j+1)`.
pub fn nearest_neighbor_generators(n: usize) -> Result<Vec<ComplexMatrix>> {
    if !(3..=10).contains(&n) {
        return Err(Error::Algebra(format!(
            "so(n) generators supported for 3 <= n <= 10, got n = {n}"
        )));
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 1..=n {
        for k in (j + 1)..=n {
            out.push(so_generator(n, j, k)?);
        }
    }
    Ok(out)
}

/// Structure constant `c` in `[a, b] = c * target`, or `None` when the
/// commutator is not proportional to `target` (or `target` vanishes).
fn proportionality(a: &ComplexMatrix, b: &ComplexMatrix, target: &ComplexMatrix) -> Option<C64> {
    let comm = commutator(a, b).ok()?;
    let tn = target.hs_inner(target).re;
    if tn == 0.0 {
        return None;
    }
    let c = target.hs_inner(&comm) / tn;
    let resid = (&comm - &target.scale(c)).frobenius_norm();
    (resid <= 1e-12 * (1.0 + comm.frobenius_norm())).then_some(c)
}

/// True when t0, t1, t2 satisfy cyclic su(2)-style relations
/// `[t_a, t_b] = c_ab t_c` with nonzero structure constants.
fn is_su2_triplet(t: &[ComplexMatrix; 3]) -> bool {
    let cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    cyc.iter().all(|&(a, b, c)| {
        proportionality(&t[a], &t[b], &t[c])
            .map(|s| s.norm() > 1e-6)
            .unwrap_or(false)
    })
}

/// Split so(4) into its two mutually commuting su(2) triplets.
///
/// Searches the signed combinations `{m_12 ± m_34, m_13 ± m_24, m_23 ± m_14}`
/// for the sign pattern making both triplets internally su(2) and mutually
/// commuting, then verifies the first triplet spans the same space as
/// (O_9, O_8, O_14) and the second as (O_6, O_11, O_13).  Errors when no
/// sign pattern works or the span identification fails.
pub fn so4_commuting_triplets() -> Result<([ComplexMatrix; 3], [ComplexMatrix; 3])> {
    let m12 = so_generator(4, 1, 2)?;
    let m13 = so_generator(4, 1, 3)?;
    let m14 = so_generator(4, 1, 4)?;
    let m23 = so_generator(4, 2, 3)?;
    let m24 = so_generator(4, 2, 4)?;
    let m34 = so_generator(4, 3, 4)?;

    let signed = |m: &ComplexMatrix, s: f64| m.scale(c64(s, 0.0));

    for signs in 0..8u32 {
        let s1 = if signs & 1 == 0 { 1.0 } else { -1.0 };
        let s2 = if signs & 2 == 0 { 1.0 } else { -1.0 };
        let s3 = if signs & 4 == 0 { 1.0 } else { -1.0 };
        let a = [
            &m12 + &signed(&m34, s1),
            &m13 + &signed(&m24, s2),
            &m23 + &signed(&m14, s3),
        ];
        let b = [
            &m12 + &signed(&m34, -s1),
            &m13 + &signed(&m24, -s2),
            &m23 + &signed(&m14, -s3),
        ];
        let mutually_commute = a.iter().all(|x| {
            b.iter().all(|y| {
                commutator(x, y)
                    .map(|c| c.frobenius_norm() <= 1e-12)
                    .unwrap_or(false)
            })
        });
        if !(mutually_commute && is_su2_triplet(&a) && is_su2_triplet(&b)) {
            continue;
        }
        // Orient the pair so the first triplet is the one spanning
        // (O_9, O_8, O_14); the opposite-sign triplet spans (O_6, O_11, O_13).
        let basis = build_operator_basis();
        let set_a: Vec<ComplexMatrix> = [9, 8, 14].iter().map(|&i| basis.op(i).clone()).collect();
        let set_b: Vec<ComplexMatrix> = [6, 11, 13].iter().map(|&i| basis.op(i).clone()).collect();
        let (first, second) = if subspace_distance(&a, &set_a) <= 1e-10 {
            (a, b)
        } else {
            (b, a)
        };
        if subspace_distance(&first, &set_a) > 1e-10 || subspace_distance(&second, &set_b) > 1e-10 {
            return Err(Error::Algebra(
                "so(4) triplets do not span the expected su(2) x su(2) operator sets".into(),
            ));
        }
        return Ok((first, second));
    }
    Err(Error::Algebra(
        "no sign pattern splits so(4) into two commuting su(2) triplets".into(),
    ))
}

/// Closure dimension of the nearest-neighbor subset `m_(j,j+1)` of so(n);
/// exposed for verification reporting.
pub fn nearest_neighbor_closure_dim(n: usize) -> Result<usize> {
    if !(3..=10).contains(&n) {
        return Err(Error::Algebra(format!(
            "so(n) closure supported for 3 <= n <= 10, got n = {n}"
        )));
    }
    let gens: Result<Vec<ComplexMatrix>> = (1..n).map(|j| so_generator(n, j, j + 1)).collect();
    let spec = SubalgebraSpec::new(format!("so({n}) nearest-neighbor chain"), gens?)?;
    let (_, closure) = is_closed_subalgebra(&spec)?;
    Ok(closure.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::span::{span_of, subspace_distance};
    use crate::algebra::{build_operator_basis, is_closed_subalgebra, SubalgebraSpec};
    use crate::linalg::commutator;

    #[test]
    fn generators_are_hermitian_with_unit_entries() {
        // Generator m_24 carries a single ±i pair at matrix slot (2, 4).
        let m = so_generator(4, 2, 4).unwrap();
        assert!(m.hermiticity_defect() < 1e-15);
        assert!((m[(1, 3)] - crate::linalg::c64(0.0, -1.0)).norm() < 1e-15);
        assert!((m[(3, 1)] - crate::linalg::c64(0.0, 1.0)).norm() < 1e-15);
        assert!(so_generator(4, 3, 3).is_err());
        assert!(so_generator(4, 1, 5).is_err());
    }

    #[test]
    fn nearest_neighbor_chain_closes_to_full_rotation_algebra() {
        // n-1 nearest-neighbor generators close onto all n(n-1)/2 of so(n).
        assert_eq!(nearest_neighbor_closure_dim(4).unwrap(), 6);
        assert_eq!(nearest_neighbor_closure_dim(5).unwrap(), 10);
    }

    #[test]
    fn so4_triplets_commute_across_and_close_within() {
        let (a, b) = so4_commuting_triplets().unwrap();
        for x in &a {
            for y in &b {
                assert!(commutator(x, y).unwrap().max_abs() < 1e-14);
            }
        }
        for triplet in [&a, &b] {
            let spec = SubalgebraSpec::new("so4 triplet", triplet.to_vec()).unwrap();
            let (closed, closure) = is_closed_subalgebra(&spec).unwrap();
            assert!(closed);
            assert_eq!(closure.len(), 3);
        }
    }

    #[test]
    fn so4_triplets_span_the_expected_basis_directions() {
        // One triplet lives on {tx/2, sy*tz/4, sy*ty/4}, the other on
        // {sy/2, sz*tx/4, sx*tx/4}; together they split so(4) ≅ su(2)⊕su(2).
        let basis = build_operator_basis();
        let (a, b) = so4_commuting_triplets().unwrap();
        let span_a = [
            basis.op(9).clone(),
            basis.op(8).clone(),
            basis.op(14).clone(),
        ];
        let span_b = [
            basis.op(6).clone(),
            basis.op(11).clone(),
            basis.op(13).clone(),
        ];
        assert!(subspace_distance(&a, &span_a) < 1e-12);
        assert!(subspace_distance(&b, &span_b) < 1e-12);
        // And the two spans are mutually orthogonal sub-algebras.
        let joint = span_of(&[
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            b[0].clone(),
            b[1].clone(),
            b[2].clone(),
        ]);
        assert_eq!(joint.dim(), 6);
    }
}
