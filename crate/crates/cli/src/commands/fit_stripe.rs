//! Superellipse fit of the accepted upper stripe from a campaign CSV.

use crate::errors::{CliError, CliResult};
use crate::output::{stdout_or_file, VERSION};
use grover_multiphase::fitting::{fit_superellipse_exponent, SuperellipseFit};
use grover_multiphase::RegisterShape;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

pub struct FitStripeArgs {
    pub points: PathBuf,
    pub n_override: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct StripeFitDocument {
    tool_version: String,
    fit: SuperellipseFit,
    phi_max: f64,
    provenance: Provenance,
}

#[derive(Debug, Serialize)]
struct Provenance {
    source: String,
    n: u64,
    seed: Option<u64>,
    samples_in_file: usize,
    accepted: usize,
    upper_stripe: usize,
}

struct ParsedCampaign {
    n: Option<u64>,
    seed: Option<u64>,
    rows: Vec<(f64, f64, bool)>,
}

fn parse_campaign(path: &Path) -> CliResult<ParsedCampaign> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut n = None;
    let mut seed = None;
    let mut header_seen = false;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((key, value)) = meta.split_once('=') {
                match key.trim() {
                    "n" => n = value.trim().parse().ok(),
                    "seed" => seed = value.trim().parse().ok(),
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if !line.starts_with("index,") {
                return Err(CliError::Usage(format!(
                    "{}:{}: expected a campaign header row, got '{line}'",
                    path.display(),
                    lineno + 1
                )));
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(CliError::Usage(format!(
                "{}:{}: expected 6 columns, got {}",
                path.display(),
                lineno + 1,
                fields.len()
            )));
        }
        let phi0: f64 = fields[1]
            .parse()
            .map_err(|_| bad_field(path, lineno, fields[1]))?;
        let phi1: f64 = fields[2]
            .parse()
            .map_err(|_| bad_field(path, lineno, fields[2]))?;
        let accepted: bool = fields[5]
            .parse()
            .map_err(|_| bad_field(path, lineno, fields[5]))?;
        rows.push((phi0, phi1, accepted));
    }
    Ok(ParsedCampaign { n, seed, rows })
}

fn bad_field(path: &Path, lineno: usize, field: &str) -> CliError {
    CliError::Usage(format!(
        "{}:{}: cannot parse field '{field}'",
        path.display(),
        lineno + 1
    ))
}

pub fn run(args: &FitStripeArgs) -> CliResult<()> {
    let campaign = parse_campaign(&args.points)?;
    let n = args.n_override.or(campaign.n).ok_or_else(|| {
        CliError::Usage(
            "the points file carries no register size; pass --n explicitly".to_string(),
        )
    })?;
    let shape = RegisterShape::new(n, 2).map_err(|e| CliError::Usage(e.to_string()))?;
    let phi_max = shape.optimal_phase()?;

    let accepted = campaign.rows.iter().filter(|r| r.2).count();
    let stripe: Vec<(f64, f64)> = campaign
        .rows
        .iter()
        .filter(|&&(phi0, phi1, ok)| ok && phi0 > phi1)
        .map(|&(phi0, phi1, _)| (phi0, phi1))
        .collect();

    let fit = fit_superellipse_exponent(&stripe, phi_max)?;
    let doc = StripeFitDocument {
        tool_version: VERSION.to_string(),
        fit,
        phi_max,
        provenance: Provenance {
            source: args.points.display().to_string(),
            n,
            seed: campaign.seed,
            samples_in_file: campaign.rows.len(),
            accepted,
            upper_stripe: stripe.len(),
        },
    };
    let mut out = stdout_or_file(args.out.as_deref())?;
    writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
    out.flush()?;
    Ok(())
}
