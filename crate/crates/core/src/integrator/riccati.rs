//! The sector Riccati equation in three interchangeable formulations.
//!
//! Each su(2) sector of the reduced problem is governed by one scalar
//! Riccati equation for `mu_plus` with zero initial condition,
//!
//! ```text
//!   mu_plus' = k_plus + k_minus mu_plus^2 - i omega(t) mu_plus
//! ```
//!
//! solved either directly, through the angle substitution
//! `mu_plus = tan(theta + k (t - t0))` with
//! `theta' = -(i/2) omega(t) sin(2 theta + 2 k (t - t0))`, or through the
//! linear second-order form `gamma'' + i omega gamma' + k^2 gamma = 0`
//! with `mu_plus = -gamma' / (k gamma)`.  The latter two require
//! `k_plus = k_minus = k`.  `mu_plus` has tan-like coordinate
//! singularities; crossing the blow-up threshold is reported as a
//! [`RiccatiSolution::singularity`], not an error — the caller segments
//! the evolution there.

use super::ode::{integrate, OdeOptions};
use super::Trajectory;
use crate::error::Error;
use crate::linalg::{c64, C64};
use crate::tol;
use crate::Result;

/// Which formulation of the sector equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RiccatiForm {
    /// The Riccati equation itself.
    Direct,
    /// Angle substitution; requires `k_plus == k_minus`.
    Theta,
    /// Linear second-order substitution; requires `k_plus == k_minus`.
    Gamma,
}

/// Sampled `mu_plus` and, when the run hit the blow-up threshold, the time
/// at which it did.  The trajectory always ends strictly before the
/// singular time.
#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    pub mu_plus: Trajectory,
    pub singularity: Option<f64>,
}

/// Solve the sector equation for `mu_plus` on `t_span` with
/// `mu_plus(t_span.0) = 0`.
///
/// `forced` lists times (strictly increasing, inside the span) that must
/// appear as exact sample knots.  `tol` is the adaptive solver tolerance.
/// Blow-up beyond [`tol::BLOWUP_THRESHOLD`] ends the trajectory early and
/// sets `singularity`; genuine tolerance failures are errors.
pub fn solve_riccati(
    k_plus: f64,
    k_minus: f64,
    omega: &dyn Fn(f64) -> f64,
    t_span: (f64, f64),
    form: RiccatiForm,
    tol: f64,
    forced: &[f64],
) -> Result<RiccatiSolution> {
    if form != RiccatiForm::Direct && k_plus != k_minus {
        return Err(Error::Solver(format!(
            "{form:?} formulation requires k_plus == k_minus, got {k_plus} and {k_minus}"
        )));
    }
    let opts = OdeOptions::with_tol(tol);
    let (t0, t1) = t_span;
    match form {
        RiccatiForm::Direct => solve_direct(k_plus, k_minus, omega, t0, t1, forced, &opts),
        RiccatiForm::Theta => solve_theta(k_plus, omega, t0, t1, forced, &opts),
        RiccatiForm::Gamma => solve_gamma(k_plus, omega, t0, t1, forced, &opts),
    }
}

fn unpack(y: &[f64]) -> C64 {
    c64(y[0], y[1])
}

fn solve_direct(
    k_plus: f64,
    k_minus: f64,
    omega: &dyn Fn(f64) -> f64,
    t0: f64,
    t1: f64,
    forced: &[f64],
    opts: &OdeOptions,
) -> Result<RiccatiSolution> {
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let mu = unpack(y);
        let d = c64(k_plus, 0.0) + mu * mu * k_minus - c64(0.0, omega(t)) * mu;
        dy[0] = d.re;
        dy[1] = d.im;
    };
    let stop =
        |_t: f64, y: &[f64]| unpack(y).norm_sqr() > tol::BLOWUP_THRESHOLD * tol::BLOWUP_THRESHOLD;
    let out = integrate(&rhs, t0, t1, &[0.0, 0.0], forced, Some(&stop), opts)?;
    let mu_plus = Trajectory::new(
        out.ts.clone(),
        out.ys.iter().map(|y| unpack(y)).collect(),
        out.dys.iter().map(|dy| unpack(dy)).collect(),
    )?;
    Ok(RiccatiSolution {
        mu_plus,
        singularity: out.stopped_at,
    })
}

fn solve_theta(
    k: f64,
    omega: &dyn Fn(f64) -> f64,
    t0: f64,
    t1: f64,
    forced: &[f64],
    opts: &OdeOptions,
) -> Result<RiccatiSolution> {
    // theta' = -(i/2) omega(t) sin(2 theta + 2 k (t - t0)); mu = tan(theta + k (t - t0)).
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let theta = unpack(y);
        let arg = theta * 2.0 + c64(2.0 * k * (t - t0), 0.0);
        let d = c64(0.0, -0.5 * omega(t)) * arg.sin();
        dy[0] = d.re;
        dy[1] = d.im;
    };
    let mu_of = |t: f64, y: &[f64]| (unpack(y) + c64(k * (t - t0), 0.0)).tan();
    let stop = |t: f64, y: &[f64]| {
        let m = mu_of(t, y);
        !(m.re.is_finite() && m.im.is_finite())
            || m.norm_sqr() > tol::BLOWUP_THRESHOLD * tol::BLOWUP_THRESHOLD
    };
    let out = integrate(&rhs, t0, t1, &[0.0, 0.0], forced, Some(&stop), opts)?;
    // Map knots through the substitution; mu' follows from the chain rule
    // d/dt tan(u) = u' (1 + tan(u)^2).
    let mut ys = Vec::with_capacity(out.ts.len());
    let mut dys = Vec::with_capacity(out.ts.len());
    for idx in 0..out.ts.len() {
        let mu = mu_of(out.ts[idx], &out.ys[idx]);
        let dtheta = unpack(&out.dys[idx]);
        ys.push(mu);
        dys.push((dtheta + k) * (c64(1.0, 0.0) + mu * mu));
    }
    let mu_plus = Trajectory::new(out.ts.clone(), ys, dys)?;
    Ok(RiccatiSolution {
        mu_plus,
        singularity: out.stopped_at,
    })
}

fn solve_gamma(
    k: f64,
    omega: &dyn Fn(f64) -> f64,
    t0: f64,
    t1: f64,
    forced: &[f64],
    opts: &OdeOptions,
) -> Result<RiccatiSolution> {
    if k == 0.0 {
        // gamma' stays 0, so mu_plus is identically zero (the k -> 0 limit).
        // Run the stepper on a trivial system purely for its span/forced-grid
        // validation and knot placement.
        let rhs = |_t: f64, _y: &[f64], dy: &mut [f64]| dy.fill(0.0);
        let out = integrate(&rhs, t0, t1, &[0.0], forced, None, opts)?;
        let zeros = vec![c64(0.0, 0.0); out.ts.len()];
        return Ok(RiccatiSolution {
            mu_plus: Trajectory::new(out.ts, zeros.clone(), zeros)?,
            singularity: None,
        });
    }
    // State (gamma, gamma'); gamma'' = -i omega gamma' - k^2 gamma.
    let rhs = |t: f64, y: &[f64], dy: &mut [f64]| {
        let g = c64(y[0], y[1]);
        let dg = c64(y[2], y[3]);
        let ddg = -c64(0.0, omega(t)) * dg - g * (k * k);
        dy[0] = dg.re;
        dy[1] = dg.im;
        dy[2] = ddg.re;
        dy[3] = ddg.im;
    };
    let mu_of = |y: &[f64]| -c64(y[2], y[3]) / (c64(y[0], y[1]) * k);
    let stop = |_t: f64, y: &[f64]| {
        let m = mu_of(y);
        !(m.re.is_finite() && m.im.is_finite())
            || m.norm_sqr() > tol::BLOWUP_THRESHOLD * tol::BLOWUP_THRESHOLD
    };
    let out = integrate(
        &rhs,
        t0,
        t1,
        &[1.0, 0.0, 0.0, 0.0],
        forced,
        Some(&stop),
        opts,
    )?;
    // mu' is evaluated through the Riccati right-hand side itself, which the
    // substitution satisfies identically.
    let mut ys = Vec::with_capacity(out.ts.len());
    let mut dys = Vec::with_capacity(out.ts.len());
    for idx in 0..out.ts.len() {
        let mu = mu_of(&out.ys[idx]);
        ys.push(mu);
        dys.push(c64(k, 0.0) + mu * mu * k - c64(0.0, omega(out.ts[idx])) * mu);
    }
    let mu_plus = Trajectory::new(out.ts.clone(), ys, dys)?;
    Ok(RiccatiSolution {
        mu_plus,
        singularity: out.stopped_at,
    })
}
