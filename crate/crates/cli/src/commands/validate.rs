//! Cross-path consistency checks: reduced basis against the full
//! N-dimensional reference, the recursion against the matrix, and the
//! flip-sign special case against the closed form.

use crate::errors::{CliError, CliResult};
use grover_multiphase::simulator::{
    apply_iteration, full_basis_trace, grover_matrix, initial_state, recursion_step, run_trace,
    PhaseAssignment, FULL_BASIS_CAP,
};
use grover_multiphase::RegisterShape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{PI, TAU};

pub struct ValidateArgs {
    pub n: u64,
    pub m: u64,
    pub draws: u64,
    pub seed: u64,
}

const TOLERANCE: f64 = 1e-10;
const ITERATIONS: u64 = 25;

pub fn run(args: &ValidateArgs) -> CliResult<()> {
    if args.n > FULL_BASIS_CAP {
        return Err(CliError::Usage(format!(
            "validate is capped at n = {FULL_BASIS_CAP} (the full-basis reference is quadratic in memory); got {}",
            args.n
        )));
    }
    let shape =
        RegisterShape::new(args.n, args.m).map_err(|e| CliError::Usage(e.to_string()))?;

    let mut worst_full = 0.0f64;
    let mut worst_recursion = 0.0f64;
    let mut worst_config = (0.0, Vec::new());

    for draw in 0..args.draws {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(draw);
        let omega: f64 = rng.random::<f64>() * TAU;
        let phis: Vec<f64> = (0..args.m).map(|_| rng.random::<f64>() * TAU).collect();
        let phases = PhaseAssignment::new(omega, phis);
        let mut solutions = Vec::with_capacity(args.m as usize);
        while solutions.len() < args.m as usize {
            let s = rng.random_range(0..args.n);
            if !solutions.contains(&s) {
                solutions.push(s);
            }
        }

        let reduced = run_trace(shape, &phases, ITERATIONS)?;
        let full = full_basis_trace(shape, &solutions, &phases, ITERATIONS)?;
        let dev = reduced
            .probs
            .iter()
            .zip(&full.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if dev > worst_full {
            worst_full = dev;
            worst_config = (omega, phases.phis().to_vec());
        }

        let g = grover_matrix(shape, &phases)?;
        let mut a = initial_state(shape);
        let mut b = initial_state(shape);
        for _ in 0..ITERATIONS {
            a = apply_iteration(&a, &g)?;
            b = recursion_step(&b, shape, &phases)?;
        }
        let mut dev_rec = (a.a - b.a).norm();
        for (x, y) in a.betas.iter().zip(&b.betas) {
            dev_rec = dev_rec.max((x - y).norm());
        }
        worst_recursion = worst_recursion.max(dev_rec);
    }

    // flip-sign phases against the closed form
    let flip = run_trace(shape, &PhaseAssignment::equal(PI, args.m as usize), ITERATIONS)?;
    let worst_closed = flip
        .probs
        .iter()
        .enumerate()
        .map(|(t, &p)| (p - shape.closed_form_probability(t as u64)).abs())
        .fold(0.0f64, f64::max);

    println!("validate: n = {}, m = {}, draws = {}", args.n, args.m, args.draws);
    println!("max |reduced - full|      = {worst_full:e}");
    println!("max |recursion - matrix|  = {worst_recursion:e}");
    println!("max |flip-sign - closed|  = {worst_closed:e}");

    let worst = worst_full.max(worst_recursion).max(worst_closed);
    if worst > TOLERANCE {
        return Err(CliError::Failure(format!(
            "deviation {worst:e} exceeds {TOLERANCE:e} (worst draw: omega = {}, phis = {:?})",
            worst_config.0, worst_config.1
        )));
    }
    println!("all deviations within {TOLERANCE:e}");
    Ok(())
}
