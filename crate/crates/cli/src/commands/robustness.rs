//! Omega scan over the superellipse parameter for one register size:
//! per-z CSV plus a summary record JSON.

use crate::errors::{CliError, CliResult};
use crate::output::{file_writer, resolve_path, write_metadata, VERSION};
use grover_multiphase::robustness::{
    exponent_law, normalize_omega, record_from_samples, scan_z_with_exponent, RobustnessRecord,
};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;

pub struct RobustnessArgs {
    pub n: u64,
    pub grid: usize,
    pub p_phi: Option<f64>,
    pub out: Option<PathBuf>,
    pub json_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RecordDocument {
    tool_version: String,
    p_phi: f64,
    record: RobustnessRecord,
}

pub fn run(args: &RobustnessArgs) -> CliResult<()> {
    let p_phi = args
        .p_phi
        .unwrap_or_else(|| exponent_law().value(args.n as f64));
    let samples = normalize_omega(&scan_z_with_exponent(args.n, args.grid, p_phi)?)?;
    let record = record_from_samples(args.n, p_phi, &samples)?;

    let csv_path = resolve_path(args.out.as_deref(), &format!("robustness-n{}.csv", args.n));
    let mut out = file_writer(&csv_path)?;
    write_metadata(
        &mut out,
        "robustness",
        &[
            ("n", args.n.to_string()),
            ("m", "2".to_string()),
            ("z_grid", args.grid.to_string()),
            ("p_phi", p_phi.to_string()),
        ],
    )?;
    writeln!(out, "z,phi0,phi1,b,k,omega_q")?;
    for s in &samples {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.z, s.phi0, s.phi1, s.b, s.k, s.omega_q
        )?;
    }
    out.flush()?;

    let json_path = resolve_path(
        args.json_out.as_deref(),
        &format!("robustness-n{}.json", args.n),
    );
    let doc = RecordDocument {
        tool_version: VERSION.to_string(),
        p_phi,
        record,
    };
    let mut jout = file_writer(&json_path)?;
    writeln!(jout, "{}", serde_json::to_string_pretty(&doc)?)?;
    jout.flush()?;

    eprintln!(
        "robustness: wrote {} and {}",
        csv_path.display(),
        json_path.display()
    );
    Ok(())
}

pub fn validate_grid(grid: usize) -> CliResult<usize> {
    if grid < grover_multiphase::robustness::MIN_Z_GRID {
        return Err(CliError::Usage(format!(
            "--grid must be at least {}",
            grover_multiphase::robustness::MIN_Z_GRID
        )));
    }
    Ok(grid)
}
