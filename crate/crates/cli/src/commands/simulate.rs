//! Trace simulation: success probability per iteration, with per-solution
//! columns.

use crate::errors::{CliError, CliResult};
use crate::output::{join_phases, stdout_or_file, write_metadata};
use crate::phases::OmegaMode;
use grover_multiphase::simulator::{run_trace, PhaseAssignment};
use grover_multiphase::RegisterShape;
use std::io::Write;

pub struct SimulateArgs {
    pub n: u64,
    pub m: u64,
    pub omega: OmegaMode,
    pub phases: Vec<f64>,
    pub iters: Option<u64>,
    pub out: Option<std::path::PathBuf>,
}

pub fn run(args: &SimulateArgs) -> CliResult<()> {
    let shape = RegisterShape::new(args.n, args.m)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if args.phases.len() != args.m as usize {
        return Err(CliError::Usage(format!(
            "--phases needs {} values for m = {}, got {}",
            args.m,
            args.m,
            args.phases.len()
        )));
    }
    let (omega, omega_note) = match args.omega {
        OmegaMode::Auto => (shape.optimal_phase()?, "auto"),
        OmegaMode::Explicit(v) => (v, "explicit"),
    };
    let phases = PhaseAssignment::new(omega, args.phases.clone());
    let iters = args.iters.unwrap_or(4 * shape.required_iterations());
    let trace = run_trace(shape, &phases, iters)?;

    let mut out = stdout_or_file(args.out.as_deref())?;
    write_metadata(
        &mut out,
        "simulate",
        &[
            ("n", args.n.to_string()),
            ("m", args.m.to_string()),
            ("omega", format!("{} ({omega_note})", phases.omega())),
            ("phases", join_phases(phases.phis())),
            ("iters", iters.to_string()),
        ],
    )?;
    write!(out, "t,p_total")?;
    for j in 0..args.m {
        write!(out, ",p_sol_{j}")?;
    }
    writeln!(out)?;
    for (t, p) in trace.probs.iter().enumerate() {
        write!(out, "{t},{p}")?;
        for v in &trace.per_solution[t] {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}
