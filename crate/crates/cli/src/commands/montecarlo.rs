//! Monte Carlo phase-pair campaign; emits one CSV row per sample.

use crate::errors::{CliError, CliResult};
use crate::output::{stdout_or_file, write_metadata};
use crate::phases::OmegaMode;
use grover_multiphase::montecarlo::{run_campaign, upper_stripe, AcceptanceCriteria};
use grover_multiphase::RegisterShape;
use std::io::Write;

pub struct MontecarloArgs {
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    pub omega: OmegaMode,
    pub criteria: AcceptanceCriteria,
    pub out: Option<std::path::PathBuf>,
}

pub fn run(args: &MontecarloArgs) -> CliResult<()> {
    let shape =
        RegisterShape::new(args.n, 2).map_err(|e| CliError::Usage(e.to_string()))?;
    let (omega, omega_note) = match args.omega {
        OmegaMode::Auto => (shape.optimal_phase()?, "auto"),
        OmegaMode::Explicit(v) => (v, "explicit"),
    };
    let points = run_campaign(shape, omega, args.samples, args.seed, &args.criteria)?;

    let mut out = stdout_or_file(args.out.as_deref())?;
    write_metadata(
        &mut out,
        "montecarlo",
        &[
            ("n", args.n.to_string()),
            ("m", "2".to_string()),
            ("omega", format!("{omega} ({omega_note})")),
            ("samples", args.samples.to_string()),
            ("seed", args.seed.to_string()),
            ("p_threshold", args.criteria.p_threshold.to_string()),
            (
                "extra_iterations",
                args.criteria.extra_iterations.to_string(),
            ),
            (
                "scan_horizon_factor",
                args.criteria.scan_horizon_factor.to_string(),
            ),
        ],
    )?;
    writeln!(out, "index,phi0,phi1,p_max,t_at_max,accepted")?;
    for (i, p) in points.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{}",
            p.phi0, p.phi1, p.p_max, p.t_at_max, p.accepted
        )?;
    }
    out.flush()?;

    let accepted = points.iter().filter(|p| p.accepted).count();
    let upper = upper_stripe(&points).len();
    eprintln!(
        "montecarlo: {accepted} of {} samples accepted ({upper} in the upper stripe)",
        points.len()
    );
    Ok(())
}
