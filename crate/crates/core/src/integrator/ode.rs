//! Adaptive Dormand–Prince 5(4) integration over real state vectors.
//!
//! The stepper is deliberately minimal: embedded error control with a
//! standard PI-free step controller, exact landing on a caller-supplied
//! list of forced output times (so downstream consumers never interpolate
//! at grid points), an optional stop predicate for detecting coordinate
//! singularities, and dense knot output `(t, y, y')` at every accepted
//! step for cubic Hermite reconstruction between knots.

use crate::error::Error;
use crate::Result;

/// Tolerances and budgets for one integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: crate::tol::SOLVER_TOL_DEFAULT,
            abs_tol: crate::tol::SOLVER_TOL_DEFAULT,
            max_steps: 20_000_000,
        }
    }
}

impl OdeOptions {
    /// Equal absolute and relative tolerance.
    pub fn with_tol(tol: f64) -> Self {
        OdeOptions {
            rel_tol: tol,
            abs_tol: tol,
            ..Default::default()
        }
    }
}

/// Accepted-step knots of one integration, plus how it ended.
#[derive(Debug, Clone)]
pub struct OdeOutput {
    /// Accepted step times, strictly increasing, starting at t0.
    pub ts: Vec<f64>,
    /// State at each knot.
    pub ys: Vec<Vec<f64>>,
    /// Right-hand side at each knot.
    pub dys: Vec<Vec<f64>>,
    /// Time of the first accepted state that tripped the stop predicate;
    /// that state is *not* recorded.  `None` when t1 was reached.
    pub stopped_at: Option<f64>,
}

/// Dormand–Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (identical to the last A row; FSAL pair).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded fourth-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Right-hand side callback: `rhs(t, y, dy)` fills `dy` with `y'(t)`.
pub type OdeRhs<'a> = dyn Fn(f64, &[f64], &mut [f64]) + 'a;
/// Early-termination predicate on accepted states.
pub type StopFn<'a> = dyn Fn(f64, &[f64]) -> bool + 'a;

/// Integrate `y' = rhs(t, y)` from `t0` to `t1`.
///
/// `forced` must be strictly increasing times inside `(t0, t1]`; every one
/// becomes an accepted-step knot hit exactly (the step is clamped and the
/// knot time assigned, not accumulated).  When `stop` returns true for an
/// accepted state, integration ends *before* recording it and
/// `stopped_at` carries that time.
pub fn integrate(
    rhs: &OdeRhs,
    t0: f64,
    t1: f64,
    y0: &[f64],
    forced: &[f64],
    stop: Option<&StopFn>,
    opts: &OdeOptions,
) -> Result<OdeOutput> {
    let span_forward = t0.is_finite() && t1.is_finite() && t1 > t0;
    if !span_forward {
        return Err(Error::Solver(format!(
            "integration span must be forward, got [{t0}, {t1}]"
        )));
    }
    let n = y0.len();
    if forced.windows(2).any(|w| w[0] >= w[1]) || forced.iter().any(|&f| f <= t0 || f > t1) {
        return Err(Error::Solver(
            "forced output times must be strictly increasing within (t0, t1]".into(),
        ));
    }

    let mut out = OdeOutput {
        ts: vec![t0],
        ys: vec![y0.to_vec()],
        dys: Vec::new(),
        stopped_at: None,
    };

    let mut k = vec![vec![0.0f64; n]; 7];
    let mut t = t0;
    let mut y = y0.to_vec();
    rhs(t, &y, &mut k[0]);
    out.dys.push(k[0].clone());

    // Initial step: conservative, controller adapts within a few steps.
    let f0_norm = k[0].iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut h = ((t1 - t0) / 100.0).min(1e-2 / (1.0 + f0_norm)).max(1e-12);

    let mut forced_idx = 0usize;
    let mut y_stage = vec![0.0f64; n];
    let mut y_new = vec![0.0f64; n];
    let mut steps = 0usize;

    while t < t1 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepBudgetExceeded {
                t,
                max_steps: opts.max_steps,
            });
        }
        // Clamp onto the next forced time (or the endpoint), remembering the
        // controller's preferred step so landing doesn't throttle the next one.
        let target = if forced_idx < forced.len() {
            forced[forced_idx]
        } else {
            t1
        };
        let h_preferred = h;
        let mut landing = false;
        if t + h >= target {
            h = target - t;
            landing = true;
        }
        let h_floor = f64::EPSILON * 16.0 * t.abs().max(1.0);
        if h < h_floor {
            return Err(Error::StepUnderflow { t });
        }

        // Stages 2..7 (k1 is fresh from FSAL or the initial evaluation).
        for s in 1..7 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                y_stage[i] = y[i] + h * acc;
            }
            let ts = t + C[s] * h;
            let (head, tail) = k.split_at_mut(s);
            let _ = head;
            rhs(ts, &y_stage, &mut tail[0]);
        }
        for i in 0..n {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate() {
                acc += B5[j] * kj[i];
            }
            y_new[i] = y[i] + h * acc;
        }

        // Embedded error estimate, scaled per component.
        let mut err_sq = 0.0;
        for i in 0..n {
            let mut e = 0.0;
            for (j, kj) in k.iter().enumerate() {
                e += (B5[j] - B4[j]) * kj[i];
            }
            e *= h;
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y_new[i].abs());
            err_sq += (e / sc) * (e / sc);
        }
        let err = (err_sq / n as f64).sqrt();

        if !err.is_finite() || err > 1.0 {
            // Reject: shrink and retry (NaN counts as a hard rejection).
            let shrink = if err.is_finite() {
                (0.9 * err.powf(-0.2)).max(0.2)
            } else {
                0.2
            };
            h *= shrink;
            continue;
        }

        // Accept.
        let t_new = if landing { target } else { t + h };
        // FSAL: stage 7 is the RHS at the accepted point.
        let k_last = k[6].clone();
        if let Some(pred) = stop {
            if pred(t_new, &y_new) {
                out.stopped_at = Some(t_new);
                return Ok(out);
            }
        }
        t = t_new;
        y.copy_from_slice(&y_new);
        k[0].copy_from_slice(&k_last);
        out.ts.push(t);
        out.ys.push(y.clone());
        out.dys.push(k_last);
        if landing && forced_idx < forced.len() && t == forced[forced_idx] {
            forced_idx += 1;
        }
        // Grow for the next step, from the controller's preferred size when
        // this step was an artificially short landing step.
        let grow = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).min(5.0)
        };
        let base = if landing { h_preferred.max(h) } else { h };
        h = (base * grow).max(1e-300);
    }

    Ok(out)
}
