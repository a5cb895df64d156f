//! Logarithmic growth law `y = c0 + c1 ln(n + c2)`, the form shared by the
//! superellipse-exponent and plateau-width extrapolations.
//!
//! The fit is separable: for a fixed shift `c2` the offset and scale are a
//! linear least-squares problem with a closed-form solution, so only `c2`
//! needs a one-dimensional search.

use super::superellipse::golden_section;
use crate::error::{Error, Result};
use serde::Serialize;

const MIN_POINTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogLawFit {
    pub c0: f64,
    pub c1: f64,
    /// Shift inside the logarithm; `n + c2` stays positive over the fitted
    /// domain.
    pub c2: f64,
    /// L2 norm of the fit residual.
    pub residual: f64,
    /// True when the shift search ran into its lower bound, i.e. the best
    /// `c2` drives `n + c2` toward zero.
    pub bounded: bool,
}

impl LogLawFit {
    pub fn new(c0: f64, c1: f64, c2: f64) -> Self {
        Self {
            c0,
            c1,
            c2,
            residual: 0.0,
            bounded: false,
        }
    }

    pub fn value(&self, n: f64) -> f64 {
        self.c0 + self.c1 * (n + self.c2).ln()
    }
}

/// Linear least squares for (c0, c1) at fixed c2; returns the sum of
/// squared residuals and the coefficients.
fn profile(points: &[(f64, f64)], c2: f64) -> (f64, f64, f64) {
    let count = points.len() as f64;
    let mut su = 0.0;
    let mut sy = 0.0;
    let mut suu = 0.0;
    let mut suy = 0.0;
    for &(n, y) in points {
        let u = (n + c2).ln();
        su += u;
        sy += y;
        suu += u * u;
        suy += u * y;
    }
    let det = count * suu - su * su;
    if det.abs() < 1e-300 {
        return (f64::INFINITY, 0.0, 0.0);
    }
    let c1 = (count * suy - su * sy) / det;
    let c0 = (sy - c1 * su) / count;
    let ss: f64 = points
        .iter()
        .map(|&(n, y)| {
            let r = c0 + c1 * (n + c2).ln() - y;
            r * r
        })
        .sum();
    (ss, c0, c1)
}

/// Least-squares fit of `y = c0 + c1 ln(n + c2)` to the points. Needs at
/// least four points with distinct `n`. The shift is found by a coarse
/// logarithmic grid over `c2 = -n_min + 10^s` followed by a golden-section
/// polish.
pub fn fit_log_law(points: &[(f64, f64)]) -> Result<LogLawFit> {
    let mut ns: Vec<f64> = points.iter().map(|p| p.0).collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    if ns.len() < MIN_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_POINTS,
            got: ns.len(),
        });
    }
    let n_min = ns[0];

    // c2 = -n_min + 10^s keeps n + c2 > 0 for every candidate
    let cost = |s: f64| profile(points, -n_min + 10f64.powf(s)).0;
    let (s_lo, s_hi) = (-3.0, 6.0);
    const GRID: usize = 400;
    let mut best_s = s_lo;
    let mut best_f = f64::INFINITY;
    for i in 0..=GRID {
        let s = s_lo + (s_hi - s_lo) * i as f64 / GRID as f64;
        let f = cost(s);
        if f < best_f {
            best_f = f;
            best_s = s;
        }
    }
    let step = (s_hi - s_lo) / GRID as f64;
    let (s, _) = golden_section(
        cost,
        (best_s - step).max(s_lo),
        (best_s + step).min(s_hi),
        1e-12,
    );
    let c2 = -n_min + 10f64.powf(s);
    let (ss, c0, c1) = profile(points, c2);
    Ok(LogLawFit {
        c0,
        c1,
        c2,
        residual: ss.sqrt(),
        bounded: s - s_lo < 2.0 * step || s_hi - s < 2.0 * step,
    })
}
