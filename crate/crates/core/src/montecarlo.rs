//! Seeded random sampling of oracle phase pairs for the two-solution
//! pipeline, with acceptance against the stripe criteria.
//!
//! Determinism contract: each sample draws its phases from an RNG stream
//! derived from `(seed, sample index)`, so a campaign produces identical
//! output for identical inputs no matter how the work is scheduled.

use crate::error::{Error, Result};
use crate::kinematics::RegisterShape;
use crate::simulator::{
    grover_matrix, initial_state, peak_probability, run_trace, success_probability,
    PhaseAssignment,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

/// One evaluated phase pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePoint {
    pub phi0: f64,
    pub phi1: f64,
    /// Peak success probability within the iteration budget.
    pub p_max: f64,
    /// Iteration reaching the peak; ties go to the smallest count.
    pub t_at_max: u64,
    pub accepted: bool,
}

/// Stripe acceptance knobs.
///
/// A pair is accepted when its success probability exceeds `p_threshold`
/// at some iteration within `t_ref + extra_iterations`, where `t_ref` is
/// the peak iteration of the all-optimal-phase run. The default budget of
/// two extra iterations is the one that reproduces the published exponent
/// law; see the fit tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceCriteria {
    pub p_threshold: f64,
    pub extra_iterations: u64,
    /// Horizon multiplier for locating the reference peak.
    pub scan_horizon_factor: u64,
}

impl Default for AcceptanceCriteria {
    fn default() -> Self {
        Self {
            p_threshold: 0.92,
            extra_iterations: 2,
            scan_horizon_factor: 4,
        }
    }
}

/// Uniform phase pairs on `[0, 2pi)^2`. Sample `i` comes from stream `i`
/// of a counter-seeded generator, independent of evaluation order.
pub fn sample_pairs(count: u64, seed: u64) -> Vec<(f64, f64)> {
    (0..count).map(|i| pair_for_index(seed, i)).collect()
}

fn pair_for_index(seed: u64, index: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let phi0 = rng.random::<f64>() * TAU;
    let phi1 = rng.random::<f64>() * TAU;
    (phi0, phi1)
}

/// Peak iteration of the run with every phase set to the optimal one,
/// scanned over `scan_horizon_factor` times the required iteration count.
/// Equals the required count whenever the schedule is deterministic.
pub fn reference_peak_iteration(
    shape: RegisterShape,
    criteria: &AcceptanceCriteria,
) -> Result<u64> {
    let phi = shape.optimal_phase()?;
    let horizon = criteria.scan_horizon_factor * shape.required_iterations();
    let trace = run_trace(shape, &PhaseAssignment::equal(phi, shape.m() as usize), horizon)?;
    Ok(peak_probability(&trace)?.1)
}

/// Evaluates one phase pair against the acceptance criteria. Restricted to
/// two-solution shapes, as is the whole stripe pipeline.
pub fn evaluate_pair(
    shape: RegisterShape,
    omega: f64,
    phi0: f64,
    phi1: f64,
    criteria: &AcceptanceCriteria,
) -> Result<SamplePoint> {
    require_two_solutions(shape)?;
    let t_ref = reference_peak_iteration(shape, criteria)?;
    evaluate_with_reference(shape, omega, phi0, phi1, criteria, t_ref)
}

fn require_two_solutions(shape: RegisterShape) -> Result<()> {
    if shape.m() != 2 {
        return Err(Error::InvalidShape {
            n: shape.n(),
            m: shape.m(),
        });
    }
    Ok(())
}

/// Inner evaluation with the reference iteration precomputed. Walks the
/// budget window directly on the reduced state, without allocating a
/// trace.
fn evaluate_with_reference(
    shape: RegisterShape,
    omega: f64,
    phi0: f64,
    phi1: f64,
    criteria: &AcceptanceCriteria,
    t_ref: u64,
) -> Result<SamplePoint> {
    let phases = PhaseAssignment::new(omega, vec![phi0, phi1]);
    let budget = t_ref + criteria.extra_iterations;
    let g = grover_matrix(shape, &phases)?;
    let mut state = initial_state(shape);
    let mut p_max = success_probability(&state);
    let mut t_at_max = 0u64;
    for t in 1..=budget {
        state = crate::simulator::apply_iteration(&state, &g)?;
        let p = success_probability(&state);
        if p > p_max {
            p_max = p;
            t_at_max = t;
        }
    }
    let accepted = p_max > criteria.p_threshold && t_at_max <= budget;
    Ok(SamplePoint {
        phi0: phases.phis()[0],
        phi1: phases.phis()[1],
        p_max,
        t_at_max,
        accepted,
    })
}

/// Evaluates `count` seeded random pairs. Samples are processed in
/// parallel and collected in index order, so the output is a pure function
/// of the arguments.
pub fn run_campaign(
    shape: RegisterShape,
    omega: f64,
    count: u64,
    seed: u64,
    criteria: &AcceptanceCriteria,
) -> Result<Vec<SamplePoint>> {
    require_two_solutions(shape)?;
    if count == 0 {
        return Ok(Vec::new());
    }
    let t_ref = reference_peak_iteration(shape, criteria)?;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let (phi0, phi1) = pair_for_index(seed, i);
            evaluate_with_reference(shape, omega, phi0, phi1, criteria, t_ref)
        })
        .collect()
}

/// Accepted points with `phi0 > phi1`: the stripe chosen for fitting.
pub fn upper_stripe(points: &[SamplePoint]) -> Vec<SamplePoint> {
    points
        .iter()
        .filter(|p| p.accepted && p.phi0 > p.phi1)
        .copied()
        .collect()
}
