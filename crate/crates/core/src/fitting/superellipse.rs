//! Quarter-superellipse fit of the accepted phase-pair stripe.
//!
//! Three of the four curve parameters are pinned analytically: the curve
//! must pass through `(phi_max, 0)` and `(2pi, phi_max)`, which fixes the
//! translation to `2pi` and both semi-axes to `phi_max - 2pi` and
//! `phi_max`. Only the exponent is fitted, by a one-dimensional implicit
//! residual that is exactly zero for points on the curve.

use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{PI, TAU};

/// Values of |cos z| or |sin z| below this snap to zero so the curve
/// endpoints are exact despite `cos(pi/2)` not being zero in floats.
const AXIS_SNAP: f64 = 1e-12;

/// Minimum usable stripe points for an exponent fit.
const MIN_STRIPE_POINTS: usize = 10;

/// Search interval for the exponent.
const EXPONENT_RANGE: (f64, f64) = (1.0, 40.0);

/// Fitted quarter-superellipse in the `(phi0, phi1)` plane.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperellipseFit {
    /// Translation along the phi0 axis; always `2pi`.
    pub s_phi0: f64,
    /// phi0 semi-axis, `phi_max - 2pi` (negative).
    pub a_phi0: f64,
    /// phi1 semi-axis, `phi_max`.
    pub a_phi1: f64,
    /// Fitted exponent, unrounded.
    pub p_phi: f64,
    /// Exponent rounded to one decimal, the reporting convention.
    pub p_phi_rounded: f64,
    /// Implicit residual sum of squares at the fitted exponent.
    pub residual: f64,
    /// Stripe points inside the curve quadrant that entered the fit.
    pub points_used: usize,
    /// Stripe points outside the quadrant, dropped before fitting.
    pub points_dropped: usize,
}

impl SuperellipseFit {
    /// Curve with pinned translation and semi-axes for the given optimal
    /// phase, and a caller-chosen exponent.
    pub fn from_phi_max(phi_max: f64, p_phi: f64) -> Self {
        Self {
            s_phi0: TAU,
            a_phi0: phi_max - TAU,
            a_phi1: phi_max,
            p_phi,
            p_phi_rounded: round_exponent(p_phi),
            residual: 0.0,
            points_used: 0,
            points_dropped: 0,
        }
    }

    pub fn phi_max(&self) -> f64 {
        self.a_phi1
    }
}

fn round_exponent(p: f64) -> f64 {
    (p * 10.0).round() / 10.0
}

/// Point on the curve at parameter `z`:
/// `phi0 = s + a0 |cos z|^{2/p}`, `phi1 = a1 |sin z|^{2/p}`.
///
/// The endpoints are exact for every exponent: `z = 0` maps to
/// `(phi_max, 0)` and `z = pi/2` to `(2pi, phi_max)`.
pub fn superellipse_point(fit: &SuperellipseFit, z: f64) -> (f64, f64) {
    let e = 2.0 / fit.p_phi;
    let c = snap_axis(z.cos().abs());
    let s = snap_axis(z.sin().abs());
    (fit.s_phi0 + fit.a_phi0 * c.powf(e), fit.a_phi1 * s.powf(e))
}

fn snap_axis(v: f64) -> f64 {
    if v < AXIS_SNAP {
        0.0
    } else {
        v
    }
}

/// Fits the exponent to stripe points by minimizing the implicit residual
/// `sum (r0^p + r1^p - 1)^2` with `r0 = (2pi - phi0)/(2pi - phi_max)` and
/// `r1 = phi1/phi_max`, over the quadrant `phi0 in [phi_max, 2pi]`,
/// `phi1 in [0, phi_max]`. Points outside the quadrant are dropped and
/// counted.
pub fn fit_superellipse_exponent(
    stripe: &[(f64, f64)],
    phi_max: f64,
) -> Result<SuperellipseFit> {
    let width0 = TAU - phi_max;
    let mut reduced = Vec::with_capacity(stripe.len());
    for &(phi0, phi1) in stripe {
        let r0 = (TAU - phi0) / width0;
        let r1 = phi1 / phi_max;
        if (0.0..=1.0).contains(&r0) && (0.0..=1.0).contains(&r1) {
            reduced.push((r0, r1));
        }
    }
    let dropped = stripe.len() - reduced.len();
    if reduced.len() < MIN_STRIPE_POINTS {
        return Err(Error::InsufficientData {
            needed: MIN_STRIPE_POINTS,
            got: reduced.len(),
        });
    }

    let cost = |p: f64| -> f64 {
        reduced
            .iter()
            .map(|&(r0, r1)| {
                let r = r0.powf(p) + r1.powf(p) - 1.0;
                r * r
            })
            .sum()
    };
    let (p, residual) = golden_section(cost, EXPONENT_RANGE.0, EXPONENT_RANGE.1, 1e-10);

    let mut fit = SuperellipseFit::from_phi_max(phi_max, p);
    fit.residual = residual;
    fit.points_used = reduced.len();
    fit.points_dropped = dropped;
    Ok(fit)
}

/// Golden-section minimizer on `[a, b]`; assumes a well-behaved landscape
/// and returns the midpoint of the final interval.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    cost: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let ratio = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let mut f1 = cost(x1);
    let mut f2 = cost(x2);
    for _ in 0..200 {
        if b - a < tol {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = cost(x2);
        }
    }
    let x = 0.5 * (a + b);
    let f = cost(x);
    (x, f)
}

/// Mean orthogonal distance of stripe points from the fitted curve,
/// restricted to points whose nearest curve parameter falls in the central
/// 80% of the quadrant arc. The exclusion keeps the high-curvature tips
/// from dominating the width measurement.
pub fn central_orthogonal_spread(points: &[(f64, f64)], fit: &SuperellipseFit) -> Option<f64> {
    const CURVE_SAMPLES: usize = 4001;
    let grid: Vec<(f64, (f64, f64))> = (0..CURVE_SAMPLES)
        .map(|i| {
            let z = i as f64 / (CURVE_SAMPLES - 1) as f64 * (PI / 2.0);
            (z, superellipse_point(fit, z))
        })
        .collect();
    let z_lo = 0.1 * PI / 2.0;
    let z_hi = 0.9 * PI / 2.0;
    let mut total = 0.0;
    let mut used = 0usize;
    for &(x, y) in points {
        let mut best = f64::INFINITY;
        let mut best_z = 0.0;
        for &(z, (cx, cy)) in &grid {
            let d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
            if d < best {
                best = d;
                best_z = z;
            }
        }
        if best_z > z_lo && best_z < z_hi {
            total += best.sqrt();
            used += 1;
        }
    }
    (used > 0).then(|| total / used as f64)
}
