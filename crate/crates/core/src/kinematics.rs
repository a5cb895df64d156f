//! Closed-form quantities of Grover search: rotation angle, iteration
//! counts, the optimal deterministic phase, iteration-jump register sizes,
//! and the bracket they induce on the robustness parameter.
//!
//! Everything here is a pure function of the register shape, safe to call
//! from any number of threads.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tolerance below which an inverse-trig argument just outside [-1, 1] is
/// treated as rounding noise and clamped.
const TRIG_CLAMP: f64 = 1e-12;

/// Tolerance below which a near-integer floor/ceil argument is snapped to
/// the integer. Exact-ratio shapes (e.g. m/n = 1/4) land within a few ulp
/// of the integer they represent; genuine non-integers stay far away.
const INTEGER_SNAP: f64 = 1e-9;

/// Database size `n` and solution count `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterShape {
    n: u64,
    m: u64,
}

impl RegisterShape {
    /// Validates `1 <= m < n`.
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::InvalidShape { n, m });
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `m / n` as a float; always in (0, 1) for a valid shape.
    pub fn ratio(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    /// Rotation angle per iteration of the standard algorithm,
    /// `theta = 2 asin(sqrt(m/n))`.
    pub fn rotation_angle(&self) -> f64 {
        2.0 * (self.ratio().sqrt()).asin()
    }

    /// Exact required iteration count,
    /// `ceil(acos(sqrt(m/n)) / (2 asin(sqrt(m/n))))`.
    ///
    /// For shapes where the ratio is an exact integer (m/n = 1/4 gives
    /// exactly 1) the snap guard keeps floating-point dust from pushing the
    /// ceiling up a step.
    pub fn required_iterations(&self) -> u64 {
        let s = self.ratio().sqrt();
        let ratio = s.acos() / (2.0 * s.asin());
        snap_integer(ratio).ceil() as u64
    }

    /// Asymptotic iteration count `ceil(pi/4 sqrt(n/m))`.
    ///
    /// Reference only: it disagrees with [`required_iterations`] after the
    /// ceiling for some shapes (n = 200, m = 3 gives 7 against the exact 6),
    /// so the pipeline never consumes it.
    ///
    /// [`required_iterations`]: Self::required_iterations
    pub fn approx_required_iterations(&self) -> u64 {
        (PI / 4.0 * (1.0 / self.ratio()).sqrt()).ceil() as u64
    }

    /// Optimal phase making the phase-matched algorithm deterministic:
    ///
    /// `2 asin( sin(pi / (6 + 4 floor((pi/asin(sqrt(m/n)) - 2)/4))) sqrt(n/m) )`
    ///
    /// The floor argument is snapped to nearby integers before flooring, so
    /// exact-ratio shapes take the published branch verbatim (which for
    /// m/n = 1/4 yields a schedule one iteration longer than
    /// [`required_iterations`](Self::required_iterations)).
    pub fn optimal_phase(&self) -> Result<f64> {
        let s = self.ratio().sqrt();
        let x = snap_integer(0.25 * (-2.0 + PI / s.asin()));
        let branch = 6.0 + 4.0 * x.floor();
        let arg = (PI / branch).sin() * (1.0 / self.ratio()).sqrt();
        let arg = clamp_unit(arg, self.n, self.m)?;
        Ok(2.0 * arg.asin())
    }

    /// Success probability of the standard algorithm (all phases pi) after
    /// `t` iterations: `sin^2((2t+1) theta / 2)`.
    pub fn closed_form_probability(&self, t: u64) -> f64 {
        let theta = self.rotation_angle();
        let s = ((2 * t + 1) as f64 * theta / 2.0).sin();
        s * s
    }
}

/// Parameter bundle of the bracket enclosing the optimal robustness
/// parameter for a given register size: the nearest iteration-jump
/// registers below and above, and the optimal phases they induce.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZBracket {
    /// Lower bracket edge: optimal phase at `v_minus + 1`.
    pub phi_minus: f64,
    /// Upper bracket edge: optimal phase at `v_plus`.
    pub phi_plus: f64,
    /// Largest jump register at or below the queried size.
    pub v_plus: u64,
    /// Smallest jump register above the queried size.
    pub v_minus: u64,
}

/// True when the required iteration count increases by one between `v` and
/// `v + 1`.
pub fn is_boundary_register(v: u64, m: u64) -> Result<bool> {
    let here = RegisterShape::new(v, m)?.required_iterations();
    let next = RegisterShape::new(v + 1, m)?.required_iterations();
    Ok(next - here == 1)
}

/// All register sizes in `[n_lo, n_hi]` at which the required iteration
/// count jumps by one. An empty range yields an empty list.
pub fn boundary_registers(m: u64, n_lo: u64, n_hi: u64) -> Result<Vec<u64>> {
    if n_lo < m + 1 {
        return Err(Error::InvalidShape { n: n_lo, m });
    }
    let mut out = Vec::new();
    for v in n_lo..=n_hi {
        if is_boundary_register(v, m)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Search cap multiplier for the upward jump-register scan.
const BRACKET_SEARCH_SPAN: u64 = 4;

/// Bracket for the optimal robustness parameter of register size `n`:
/// `v_plus` is the largest jump register `<= n` (the queried size counts as
/// its own lower jump when it sits exactly on one), `v_minus` the smallest
/// jump register `> n`. The bracket edges are the optimal phases evaluated
/// at `v_minus + 1` and `v_plus`.
pub fn zmax_bracket(n: u64, m: u64) -> Result<ZBracket> {
    RegisterShape::new(n, m)?;
    let v_plus = (m + 1..=n)
        .rev()
        .find(|&v| is_boundary_register(v, m).unwrap_or(false))
        .ok_or(Error::BoundarySearch {
            n,
            m,
            direction: "below",
        })?;
    let cap = BRACKET_SEARCH_SPAN * n + 64;
    let v_minus = (n + 1..=cap)
        .find(|&v| is_boundary_register(v, m).unwrap_or(false))
        .ok_or(Error::BoundarySearch {
            n,
            m,
            direction: "above",
        })?;
    let phi_plus = RegisterShape::new(v_plus, m)?.optimal_phase()?;
    let phi_minus = RegisterShape::new(v_minus + 1, m)?.optimal_phase()?;
    Ok(ZBracket {
        phi_minus,
        phi_plus,
        v_plus,
        v_minus,
    })
}

/// Snaps values within [`INTEGER_SNAP`] of an integer onto it.
fn snap_integer(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() <= INTEGER_SNAP {
        r
    } else {
        x
    }
}

/// Clamps arguments within [`TRIG_CLAMP`] of the unit interval; anything
/// farther out is a genuine domain violation.
fn clamp_unit(x: f64, n: u64, m: u64) -> Result<f64> {
    if x.abs() <= 1.0 {
        Ok(x)
    } else if x.abs() <= 1.0 + TRIG_CLAMP {
        Ok(x.signum())
    } else {
        Err(Error::TrigDomain { value: x, n, m })
    }
}
