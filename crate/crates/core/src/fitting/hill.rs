//! Asymmetric modified Hill function: a plateau-shaped curve with
//! independent left/right widths and slopes, fitted to success-probability
//! traces by multi-start simplex descent.

use super::nelder_mead::{self, Options};
use crate::error::{Error, Result};
use crate::simulator::RunTrace;
use serde::Serialize;

/// Number of free parameters of the Hill curve.
pub const HILL_PARAM_COUNT: usize = 6;

/// Fitted Hill parameters plus the fit-quality standard deviation.
///
/// Negative `k_l`/`k_r` are admissible: the curve only ever sees `|k|`, so
/// a fit that wanders to the mirrored sign evaluates identically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HillFit {
    /// Plateau height.
    pub b: f64,
    /// Left width.
    pub k_l: f64,
    /// Left slope.
    pub n_l: f64,
    /// Right width.
    pub k_r: f64,
    /// Right slope.
    pub n_r: f64,
    /// Junction point of the two branches, in iterations.
    pub w: f64,
    /// Standard deviation of the fit residual.
    pub sigma: f64,
    /// False when no simplex start met the convergence tolerance.
    pub converged: bool,
    /// True when the input trace was flat and the fit degenerated to its
    /// mean.
    pub flat: bool,
}

impl HillFit {
    /// Plateau width `|k_l| + |k_r|`; zero only for a degenerate fit.
    pub fn plateau_width(&self) -> f64 {
        self.k_l.abs() + self.k_r.abs()
    }
}

/// Evaluates the Hill curve at `t`.
///
/// The two branches meet continuously at `t = w`, where the value is
/// exactly `b` (the sign factor is zero there and both fractional terms
/// are at their `|t - w| = 0` limit of one).
pub fn hill_value(fit: &HillFit, t: f64) -> f64 {
    eval(
        &[fit.b, fit.k_l, fit.n_l, fit.k_r, fit.n_r, fit.w],
        t,
    )
}

fn eval(x: &[f64], t: f64) -> f64 {
    let (b, k_l, n_l, k_r, n_r, w) = (x[0], x[1], x[2], x[3], x[4], x[5]);
    let d = t - w;
    if d == 0.0 {
        return b;
    }
    if d > 0.0 {
        let kp = k_r.abs().powf(n_r);
        b * kp / (d.powf(n_r) + kp)
    } else {
        let kp = k_l.abs().powf(n_l);
        b * kp / ((-d).powf(n_l) + kp)
    }
}

/// Sum of squared residuals of the parameter vector against the points,
/// with a large penalty outside the box.
fn sum_sq(x: &[f64], points: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let mut violation = 0.0;
    for i in 0..HILL_PARAM_COUNT {
        violation += (lo[i] - x[i]).max(0.0) + (x[i] - hi[i]).max(0.0);
    }
    if violation > 0.0 {
        return 1e6 * (1.0 + violation);
    }
    let (b, k_l, n_l, k_r, n_r, w) = (x[0], x[1], x[2], x[3], x[4], x[5]);
    let kp_l = k_l.abs().powf(n_l);
    let kp_r = k_r.abs().powf(n_r);
    let mut acc = 0.0;
    for (i, &p) in points.iter().enumerate() {
        let d = i as f64 - w;
        let value = if d == 0.0 {
            b
        } else if d > 0.0 {
            b * kp_r / (d.powf(n_r) + kp_r)
        } else {
            b * kp_l / ((-d).powf(n_l) + kp_l)
        };
        let r = value - p;
        acc += r * r;
    }
    acc
}

/// Range below which a trace counts as flat.
const FLAT_RANGE: f64 = 1e-9;

/// Fits the six Hill parameters to `trace.probs[0..=t_fit_max]` by
/// multi-start simplex descent: nine starts on a slope grid, each refined
/// from the measured peak location and the width of the region above 90%
/// of the peak, followed by a polish run from the best candidate.
pub fn fit_hill(trace: &RunTrace, t_fit_max: u64) -> Result<HillFit> {
    let t_fit_max = t_fit_max as usize;
    if trace.probs.len() <= t_fit_max {
        return Err(Error::InsufficientData {
            needed: t_fit_max + 1,
            got: trace.probs.len(),
        });
    }
    if t_fit_max < 10 {
        return Err(Error::FitWindowTooShort {
            points: t_fit_max + 1,
            params: HILL_PARAM_COUNT,
        });
    }
    Ok(fit_series(&trace.probs[..=t_fit_max]))
}

pub(crate) fn fit_series(points: &[f64]) -> HillFit {
    let count = points.len();
    let horizon = (count - 1) as f64;
    let p_max = points.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let p_min = points.iter().cloned().fold(f64::INFINITY, f64::min);

    if p_max - p_min <= FLAT_RANGE {
        let mean = points.iter().sum::<f64>() / count as f64;
        let mut fit = HillFit {
            b: mean,
            k_l: horizon,
            n_l: 2.0,
            k_r: horizon,
            n_r: 2.0,
            w: horizon / 2.0,
            sigma: 0.0,
            converged: true,
            flat: true,
        };
        fit.sigma = sigma_of(&fit, points);
        return fit;
    }

    let argmax = points
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let above: Vec<usize> = (0..count)
        .filter(|&i| points[i] >= 0.9 * p_max)
        .collect();
    let half_width = match (above.first(), above.last()) {
        (Some(&first), Some(&last)) => ((last - first) as f64 / 2.0).max(1.0),
        _ => 2.0,
    };

    let lo = [0.0, 1e-3, 0.5, 1e-3, 0.5, 0.0];
    let hi = [1.2, horizon, 64.0, horizon, 64.0, horizon];
    let cost = |x: &[f64]| sum_sq(x, points, &lo, &hi);

    let main = Options {
        max_evals: 50_000,
        diameter_tol: 1e-8,
    };
    let polish = Options {
        max_evals: 20_000,
        diameter_tol: 1e-10,
    };

    let mut best: Option<nelder_mead::Outcome> = None;
    for &n_l0 in &[2.0, 5.0, 10.0] {
        for &n_r0 in &[2.0, 5.0, 10.0] {
            let x0 = [p_max, half_width, n_l0, half_width, n_r0, argmax as f64];
            let scale = [
                0.1,
                (half_width * 0.3).max(0.5),
                n_l0 * 0.5,
                (half_width * 0.3).max(0.5),
                n_r0 * 0.5,
                2.0,
            ];
            let out = nelder_mead::minimize(cost, &x0, &scale, &main);
            if best.as_ref().is_none_or(|b| out.value < b.value) {
                best = Some(out);
            }
        }
    }
    let mut best = best.expect("at least one start");

    // polish passes tighten the simplex around the winner; noiseless data
    // needs the extra digits
    for _ in 0..2 {
        let scale: Vec<f64> = best.x.iter().map(|v| (v.abs() * 0.01).max(1e-5)).collect();
        let refined = nelder_mead::minimize(cost, &best.x, &scale, &polish);
        if refined.value < best.value {
            let converged = best.converged || refined.converged;
            best = refined;
            best.converged = converged;
        } else {
            best.converged = best.converged || refined.converged;
        }
    }

    let mut fit = HillFit {
        b: best.x[0],
        k_l: best.x[1],
        n_l: best.x[2],
        k_r: best.x[3],
        n_r: best.x[4],
        w: best.x[5],
        sigma: 0.0,
        converged: best.converged,
        flat: false,
    };
    fit.sigma = sigma_of(&fit, points);
    fit
}

fn sigma_of(fit: &HillFit, points: &[f64]) -> f64 {
    let rho = points.len();
    let dof = (rho - HILL_PARAM_COUNT) as f64;
    let ss: f64 = points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let r = hill_value(fit, i as f64) - p;
            r * r
        })
        .sum();
    (ss / dof).sqrt()
}

/// Fit-quality standard deviation over `t = 0..=t_fit_max`:
/// `sigma = sqrt(sum (W(t) - P(t))^2 / (rho - q))` with `rho` points and
/// `q = 6` parameters.
pub fn fit_sigma(fit: &HillFit, trace: &RunTrace, t_fit_max: u64) -> Result<f64> {
    let t_fit_max = t_fit_max as usize;
    if trace.probs.len() <= t_fit_max {
        return Err(Error::InsufficientData {
            needed: t_fit_max + 1,
            got: trace.probs.len(),
        });
    }
    let rho = t_fit_max + 1;
    if rho <= HILL_PARAM_COUNT {
        return Err(Error::FitWindowTooShort {
            points: rho,
            params: HILL_PARAM_COUNT,
        });
    }
    Ok(sigma_of(fit, &trace.probs[..=t_fit_max]))
}
