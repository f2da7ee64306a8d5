//! Physical Hamiltonians: the driven two-junction Josephson qubit pair and
//! the n-level nearest-neighbor chain.
//!
//! Units: hbar = 1; all energies are angular frequencies in rad/ns (a
//! quoted "GHz" value like 7.85 is used numerically as 7.85 rad/ns), time
//! in ns.  Output grids are usually expressed through the dimensionless
//! drive phase (omega t / 2 pi).

use crate::algebra::{son::so_generator, OperatorBasis};
use crate::error::Error;
use crate::linalg::{c64, ComplexMatrix, C64};
use crate::tol;
use crate::Result;

/// How the junction energies depend on time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Modulation {
    /// `E_J1`, `E_J2` fixed at their amplitude values.
    Constant,
    /// `E_J1(t) = EJ1_amp cos(omega t + delta)`, `E_J2(t) = EJ2_amp cos(omega t)`.
    Harmonic,
}

/// Parameters of the two coupled Josephson junctions.
///
/// `e00` and `e10` are the symmetric/antisymmetric charge-state energies
/// (the Hamiltonian depends on them only through their sum and difference);
/// `ej1_amp`, `ej2_amp` are the junction coupling amplitudes; `mod_omega`
/// and `delta` describe the harmonic drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JosephsonParams {
    pub e00: f64,
    pub e10: f64,
    pub ej1_amp: f64,
    pub ej2_amp: f64,
    pub mod_omega: f64,
    pub delta: f64,
    pub modulation: Modulation,
}

impl JosephsonParams {
    /// Validate finiteness and the harmonic-drive frequency.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.e00,
            self.e10,
            self.ej1_amp,
            self.ej2_amp,
            self.mod_omega,
            self.delta,
        ];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("Josephson parameters must be finite".into()));
        }
        if self.modulation == Modulation::Harmonic && self.mod_omega <= 0.0 {
            return Err(Error::Config(
                "harmonic modulation requires mod_omega > 0".into(),
            ));
        }
        Ok(())
    }

    /// Junction energy `E_J1` at time `t`.
    pub fn ej1(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::Constant => self.ej1_amp,
            Modulation::Harmonic => self.ej1_amp * (self.mod_omega * t + self.delta).cos(),
        }
    }

    /// Junction energy `E_J2` at time `t`.
    pub fn ej2(&self, t: f64) -> f64 {
        match self.modulation {
            Modulation::Constant => self.ej2_amp,
            Modulation::Harmonic => self.ej2_amp * (self.mod_omega * t).cos(),
        }
    }
}

/// The 4x4 two-junction Hamiltonian at time `t`.
///
/// Diagonal `(E00, E10, E10, E00)`; `-E_J1(t)/2` couples states (1,2) and
/// (3,4); `-E_J2(t)/2` couples (1,3) and (2,4).  Hermitian by construction.
pub fn josephson_hamiltonian(p: &JosephsonParams, t: f64) -> ComplexMatrix {
    let ej1 = -0.5 * p.ej1(t);
    let ej2 = -0.5 * p.ej2(t);
    let mut h = ComplexMatrix::zeros(4);
    h[(0, 0)] = c64(p.e00, 0.0);
    h[(1, 1)] = c64(p.e10, 0.0);
    h[(2, 2)] = c64(p.e10, 0.0);
    h[(3, 3)] = c64(p.e00, 0.0);
    h[(0, 1)] = c64(ej1, 0.0);
    h[(1, 0)] = c64(ej1, 0.0);
    h[(2, 3)] = c64(ej1, 0.0);
    h[(3, 2)] = c64(ej1, 0.0);
    h[(0, 2)] = c64(ej2, 0.0);
    h[(2, 0)] = c64(ej2, 0.0);
    h[(1, 3)] = c64(ej2, 0.0);
    h[(3, 1)] = c64(ej2, 0.0);
    h
}

/// Expand a 4x4 matrix in the operator basis.
///
/// Returns the 16 coefficients `c` with `h = sum c_i O_i` (index 0 holds
/// the `O_1` coefficient).  The expansion is exact for any 4x4 matrix;
/// a residual above [`tol::EXPANSION_RESIDUAL`] signals a corrupted basis
/// and is an error.  For Hermitian input all coefficients are real within
/// the same tolerance.
pub fn decompose_in_basis(h: &ComplexMatrix, basis: &OperatorBasis) -> Result<Vec<C64>> {
    let (coeffs, residual) = basis.expand(h)?;
    if residual > tol::EXPANSION_RESIDUAL {
        return Err(Error::ExpansionResidual {
            residual,
            tol: tol::EXPANSION_RESIDUAL,
        });
    }
    Ok(coeffs)
}

/// Scalar drives and sector couplings derived from [`JosephsonParams`].
///
/// The evolution splits into two commuting su(2) sectors: the `mu` sector
/// is driven by `omega_minus` with couplings `(k_plus, k_minus)`, and the
/// `nu` sector by `omega_plus` with `(big_k_plus, big_k_minus)`.  The
/// coupling signs are fixed by requiring the assembled evolution operator
/// to match the brute-force propagator: `k_± = +(E00-E10)/2` on the `mu`
/// sector and `K_± = -(E00-E10)/2` on the `nu` sector (the transposed
/// convention fails that comparison at order unity).
#[derive(Debug, Clone, Copy)]
pub struct DriveFunctions {
    params: JosephsonParams,
    /// `mu`-sector couplings, `k_± = +(E00-E10)/2`.
    pub k_plus: f64,
    pub k_minus: f64,
    /// `nu`-sector couplings, `K_± = -k_± = -(E00-E10)/2`.
    pub big_k_plus: f64,
    pub big_k_minus: f64,
}

impl DriveFunctions {
    /// Drive of the `nu` sector: `omega_plus(t) = -E_J2(t) - E_J1(t)`.
    pub fn omega_plus(&self, t: f64) -> f64 {
        -self.params.ej2(t) - self.params.ej1(t)
    }

    /// Drive of the `mu` sector: `omega_minus(t) = -E_J2(t) + E_J1(t)`.
    pub fn omega_minus(&self, t: f64) -> f64 {
        -self.params.ej2(t) + self.params.ej1(t)
    }

    /// Rate of the global-phase quadrature: `(E00 + E10)/2`.
    pub fn omega0_rate(&self, _t: f64) -> f64 {
        0.5 * (self.params.e00 + self.params.e10)
    }

    /// The parameters these drives were derived from.
    pub fn params(&self) -> &JosephsonParams {
        &self.params
    }
}

/// Derive the scalar drive functions and couplings from the parameters.
pub fn drive_functions(p: &JosephsonParams) -> Result<DriveFunctions> {
    p.validate()?;
    let k = 0.5 * (p.e00 - p.e10);
    Ok(DriveFunctions {
        params: *p,
        k_plus: k,
        k_minus: k,
        big_k_plus: -k,
        big_k_minus: -k,
    })
}

/// Couplings of the n = 4 nearest-neighbor chain Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearestNeighborParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// The tridiagonal chain Hamiltonian `alpha m_12 + beta m_23 + gamma m_34`.
pub fn nearest_neighbor_hamiltonian(p: &NearestNeighborParams) -> Result<ComplexMatrix> {
    if ![p.alpha, p.beta, p.gamma].iter().all(|x| x.is_finite()) {
        return Err(Error::Config(
            "nearest-neighbor couplings must be finite".into(),
        ));
    }
    let m12 = so_generator(4, 1, 2)?;
    let m23 = so_generator(4, 2, 3)?;
    let m34 = so_generator(4, 3, 4)?;
    Ok(
        &(&m12.scale(c64(p.alpha, 0.0)) + &m23.scale(c64(p.beta, 0.0)))
            + &m34.scale(c64(p.gamma, 0.0)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_operator_basis, pseudo_spin_operators};

    fn sample_params() -> JosephsonParams {
        JosephsonParams {
            e00: 3.925,
            e10: -3.925,
            ej1_amp: 13.4,
            ej2_amp: 9.1,
            mod_omega: 1.0,
            delta: 0.0,
            modulation: Modulation::Harmonic,
        }
    }

    #[test]
    fn hamiltonian_decomposes_onto_four_basis_directions() {
        // H = c1 O_1 + c4 O_4 + c5 O_5 + c9 O_9, all other coefficients zero:
        // c1 = (E00+E10)/2, c4 = 2(E00-E10), c5 = -E_J2, c9 = -E_J1.
        let p = sample_params();
        let basis = build_operator_basis();
        let t = 0.37;
        let h = josephson_hamiltonian(&p, t);
        assert!(h.hermiticity_defect() < 1e-15);
        let c = decompose_in_basis(&h, &basis).unwrap();
        let expected = [
            (0, 0.5 * (p.e00 + p.e10)),
            (3, 2.0 * (p.e00 - p.e10)),
            (4, -p.ej2(t)),
            (8, -p.ej1(t)),
        ];
        for (idx, want) in expected {
            assert!((c[idx] - c64(want, 0.0)).norm() < 1e-12, "c[{idx}]");
        }
        for (idx, coeff) in c.iter().enumerate() {
            if ![0, 3, 4, 8].contains(&idx) {
                assert!(coeff.norm() < 1e-12, "c[{idx}] should vanish");
            }
        }
    }

    #[test]
    fn hamiltonian_equals_pseudo_spin_combination() {
        // The same H written in the pseudo-spin split:
        // H = (E00+E10)/2 I + (K/2)(S+ + S-) + (ω+/2) S_z
        //                   + (k/2)(s+ + s-) + (ω-/2) s_z
        // with K = -(E00-E10)/2 and k = +(E00-E10)/2.
        let p = sample_params();
        let df = drive_functions(&p).unwrap();
        let ps = pseudo_spin_operators();
        let t = 1.234;
        let h = josephson_hamiltonian(&p, t);
        let id = ComplexMatrix::identity(4);
        let mut built = id.scale(c64(df.omega0_rate(t), 0.0));
        built = &built + &(&ps.big_plus + &ps.big_minus).scale(c64(0.5 * df.big_k_plus, 0.0));
        built = &built + &ps.big_z.scale(c64(0.5 * df.omega_plus(t), 0.0));
        built = &built + &(&ps.small_plus + &ps.small_minus).scale(c64(0.5 * df.k_plus, 0.0));
        built = &built + &ps.small_z.scale(c64(0.5 * df.omega_minus(t), 0.0));
        assert!((&h - &built).max_abs() < 1e-12);
    }

    #[test]
    fn drive_constants_carry_opposite_signs() {
        let df = drive_functions(&sample_params()).unwrap();
        assert!((df.k_plus - 3.925).abs() < 1e-15);
        assert!((df.k_minus - 3.925).abs() < 1e-15);
        assert!((df.big_k_plus + 3.925).abs() < 1e-15);
        assert!((df.big_k_minus + 3.925).abs() < 1e-15);
        // Harmonic drives at t = 0: ω± = -E_J2(0) ∓ E_J1(0).
        assert!((df.omega_plus(0.0) - (-9.1 - 13.4)).abs() < 1e-12);
        assert!((df.omega_minus(0.0) - (-9.1 + 13.4)).abs() < 1e-12);
    }

    #[test]
    fn modulation_kinds_and_phase_offset() {
        let mut p = sample_params();
        p.delta = std::f64::consts::FRAC_PI_4;
        let quarter = 0.25 * std::f64::consts::TAU / p.mod_omega;
        assert!((p.ej1(0.0) - 13.4 * p.delta.cos()).abs() < 1e-12);
        // E_J2 has no offset: it vanishes at a quarter period.
        assert!(p.ej2(quarter).abs() < 1e-12);
        p.modulation = Modulation::Constant;
        assert!((p.ej1(17.0) - 13.4).abs() < 1e-15);
        assert!((p.ej2(17.0) - 9.1).abs() < 1e-15);
    }

    #[test]
    fn validate_rejects_bad_parameters() {
        let mut p = sample_params();
        p.mod_omega = 0.0;
        assert!(p.validate().is_err());
        p = sample_params();
        p.e00 = f64::NAN;
        assert!(p.validate().is_err());
        assert!(sample_params().validate().is_ok());
    }

    #[test]
    fn nearest_neighbor_hamiltonian_lies_in_chain_span() {
        let p = NearestNeighborParams {
            alpha: 0.7,
            beta: -1.3,
            gamma: 2.1,
        };
        let h = nearest_neighbor_hamiltonian(&p).unwrap();
        assert!(h.hermiticity_defect() < 1e-15);
        // It is exactly α m12 + β m23 + γ m34.
        let gens = crate::algebra::son::nearest_neighbor_generators(4).unwrap();
        // Generators come in lexicographic (j,k) order; adjacent ones are
        // m12 at 0, m23 at 3, m34 at 5.
        let built = &(&gens[0].scale(c64(p.alpha, 0.0)) + &gens[3].scale(c64(p.beta, 0.0)))
            + &gens[5].scale(c64(p.gamma, 0.0));
        assert!((&h - &built).max_abs() < 1e-13);
    }
}
