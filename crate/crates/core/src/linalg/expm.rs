//! Matrix exponential by scaling and squaring with diagonal Padé approximants.
//!
//! Degree selection follows the standard backward-error analysis: pick the
//! smallest degree in {3, 5, 7, 9, 13} whose applicability radius covers
//! ||A||_1, and only scale when even degree 13 does not.  Diagonal Padé
//! approximants of the exponential map anti-Hermitian arguments to exactly
//! unitary matrices (up to rounding), which the time-ordered propagator in
//! [`crate::oracle`] relies on.

use super::{solve_lu, ComplexMatrix, C64};
use crate::Result;

/// Applicability radii theta_m for degrees 3, 5, 7, 9, 13 (double precision).
const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068e0),
    (13, 5.371_920_351_148_152e0),
];

/// Padé numerator coefficients b_0..b_m for each degree.
fn pade_coefficients(m: usize) -> &'static [f64] {
    match m {
        3 => &[120.0, 60.0, 12.0, 1.0],
        5 => &[30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => &[
            17_297_280.0,
            8_648_640.0,
            1_995_840.0,
            277_200.0,
            25_200.0,
            1512.0,
            56.0,
            1.0,
        ],
        9 => &[
            17_643_225_600.0,
            8_821_612_800.0,
            2_075_673_600.0,
            302_702_400.0,
            30_270_240.0,
            2_162_160.0,
            110_880.0,
            3960.0,
            90.0,
            1.0,
        ],
        13 => &[
            64_764_752_532_480_000.0,
            32_382_376_266_240_000.0,
            7_771_770_303_897_600.0,
            1_187_353_796_428_800.0,
            129_060_195_264_000.0,
            10_559_470_521_600.0,
            670_442_572_800.0,
            33_522_128_640.0,
            1_323_241_920.0,
            40_840_800.0,
            960_960.0,
            16_380.0,
            182.0,
            1.0,
        ],
        _ => unreachable!("unsupported Padé degree"),
    }
}

/// Evaluate the degree-`m` diagonal Padé approximant r_m(A) = q(A)^-1 p(A),
/// splitting p into even part V and odd part U so q = V - U, p = V + U.
fn pade(a: &ComplexMatrix, m: usize) -> Result<ComplexMatrix> {
    let n = a.dim();
    let b = pade_coefficients(m);
    let ident = ComplexMatrix::identity(n);
    let a2 = a * a;

    let (u, v) = if m < 13 {
        // U = A (b_m A^{m-1} + ... + b_1 I) over even powers; V analogous.
        let mut powers = vec![ident.clone(), a2.clone()]; // A^0, A^2, A^4, ...
        for _ in 2..=(m / 2) {
            let next = powers.last().unwrap() * &a2;
            powers.push(next);
        }
        let mut u_inner = ComplexMatrix::zeros(n);
        let mut v = ComplexMatrix::zeros(n);
        for (k, p) in powers.iter().enumerate() {
            u_inner = &u_inner + &p.scale(C64::new(b[2 * k + 1], 0.0));
            v = &v + &p.scale(C64::new(b[2 * k], 0.0));
        }
        (a * &u_inner, v)
    } else {
        // Degree 13 uses the factored form with A^2, A^4, A^6 only.
        let a4 = &a2 * &a2;
        let a6 = &a4 * &a2;
        let u_high = &(&a6.scale(C64::new(b[13], 0.0)) + &a4.scale(C64::new(b[11], 0.0)))
            + &a2.scale(C64::new(b[9], 0.0));
        let u_low = &(&(&a6.scale(C64::new(b[7], 0.0)) + &a4.scale(C64::new(b[5], 0.0)))
            + &a2.scale(C64::new(b[3], 0.0)))
            + &ident.scale(C64::new(b[1], 0.0));
        let u = a * &(&(&a6 * &u_high) + &u_low);
        let v_high = &(&a6.scale(C64::new(b[12], 0.0)) + &a4.scale(C64::new(b[10], 0.0)))
            + &a2.scale(C64::new(b[8], 0.0));
        let v_low = &(&(&a6.scale(C64::new(b[6], 0.0)) + &a4.scale(C64::new(b[4], 0.0)))
            + &a2.scale(C64::new(b[2], 0.0)))
            + &ident.scale(C64::new(b[0], 0.0));
        let v = &(&a6 * &v_high) + &v_low;
        (u, v)
    };

    // r = (V - U)^-1 (V + U)
    solve_lu(&(&v - &u), &(&v + &u))
}

/// Matrix exponential `exp(a)`.
///
/// Relative accuracy is better than [`crate::tol::EXPM_RELATIVE`] for
/// ||a|| <= 10; arguments of any norm are handled by scaling and squaring.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = a.one_norm();
    if !norm.is_finite() {
        return Err(crate::error::Error::Solver(
            "matrix exponential of non-finite matrix".into(),
        ));
    }
    for &(m, theta) in &THETA {
        if norm <= theta {
            return pade(a, m);
        }
    }
    // Scale so ||A/2^s||_1 <= theta_13, apply degree 13, square back.
    let theta13 = THETA[4].1;
    let s = (norm / theta13).log2().ceil().max(0.0) as u32;
    let scaled = a.scale(C64::new((0.5f64).powi(s as i32), 0.0));
    let mut r = pade(&scaled, 13)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
