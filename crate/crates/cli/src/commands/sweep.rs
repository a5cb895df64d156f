//! Register-size sweep: one robustness record per size plus the fitted
//! plateau-width growth law compared against the published coefficients.

use crate::errors::{CliError, CliResult};
use crate::output::{file_writer, resolve_path, write_metadata, VERSION};
use grover_multiphase::fitting::LogLawFit;
use grover_multiphase::robustness::{kmax_law, plateau_law, register_sweep};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

pub struct SweepArgs {
    pub from: u64,
    pub to: u64,
    pub step: u64,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct LawDocument {
    tool_version: String,
    sizes: Vec<u64>,
    fitted: LogLawFit,
    published: LogLawFit,
    /// Largest relative deviation of the fitted curve from the published
    /// one over the swept sizes.
    max_relative_deviation: f64,
    failures: Vec<(u64, String)>,
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    if args.step == 0 || args.to < args.from {
        return Err(CliError::Usage(
            "sweep needs --from <= --to and a nonzero --step".to_string(),
        ));
    }
    let sizes: Vec<u64> = (args.from..=args.to).step_by(args.step as usize).collect();
    let outcome = register_sweep(&sizes, args.grid);
    for (n, why) in &outcome.failures {
        eprintln!("sweep: n = {n} failed: {why}");
    }
    if outcome.records.is_empty() {
        return Err(CliError::Failure(
            "sweep produced no usable record".to_string(),
        ));
    }

    let csv_path = resolve_path(args.out.as_deref(), "sweep.csv");
    let mut out = file_writer(&csv_path)?;
    write_metadata(
        &mut out,
        "sweep",
        &[
            ("from", args.from.to_string()),
            ("to", args.to.to_string()),
            ("step", args.step.to_string()),
            ("z_grid", args.grid.to_string()),
        ],
    )?;
    writeln!(
        out,
        "n,z_max,omega_max,phi0_max,phi1_max,k_max_width,phi_minus,phi_plus,flags"
    )?;
    for r in &outcome.records {
        let flags = if r.flags.is_empty() {
            "ok".to_string()
        } else {
            r.flags.join(";")
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{flags}",
            r.n,
            r.z_max,
            r.omega_max,
            r.phi0_max,
            r.phi1_max,
            r.k_max_width,
            r.bracket.phi_minus,
            r.bracket.phi_plus
        )?;
    }
    out.flush()?;

    let fitted = kmax_law(&outcome.records)?;
    let published = plateau_law();
    let max_relative_deviation = outcome
        .records
        .iter()
        .map(|r| {
            let ours = fitted.value(r.n as f64);
            let reference = published.value(r.n as f64);
            ((ours - reference) / reference).abs()
        })
        .fold(0.0f64, f64::max);

    let json_path = resolve_path(args.json_out.as_deref(), "sweep-law.json");
    let doc = LawDocument {
        tool_version: VERSION.to_string(),
        sizes,
        fitted,
        published,
        max_relative_deviation,
        failures: outcome.failures,
    };
    let mut jout = file_writer(&json_path)?;
    writeln!(jout, "{}", serde_json::to_string_pretty(&doc)?)?;
    jout.flush()?;

    eprintln!(
        "sweep: {} records, wrote {} and {}",
        outcome.records.len(),
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}
