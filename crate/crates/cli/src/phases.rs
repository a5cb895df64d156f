//! Phase token parsing: plain decimals plus the `pi` shorthand family
//! (`pi`, `2pi`, `0.5pi`, `-0.25pi`).

use crate::errors::{CliError, CliResult};
use std::f64::consts::PI;

pub fn parse_phase(token: &str) -> CliResult<f64> {
    let t = token.trim();
    if let Some(prefix) = t.strip_suffix("pi") {
        let factor = if prefix.is_empty() {
            1.0
        } else {
            prefix.parse::<f64>().map_err(|_| bad_token(t))?
        };
        return Ok(factor * PI);
    }
    t.parse::<f64>().map_err(|_| bad_token(t))
}

pub fn parse_phase_list(raw: &str) -> CliResult<Vec<f64>> {
    raw.split(',').map(parse_phase).collect()
}

fn bad_token(token: &str) -> CliError {
    CliError::Usage(format!(
        "cannot parse phase '{token}' (expected a decimal or a pi multiple like 'pi', '2pi', '0.5pi')"
    ))
}

/// Diffusion-phase flag: `auto` resolves to the optimal phase of the run's
/// shape at invocation time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OmegaMode {
    Auto,
    Explicit(f64),
}

pub fn parse_omega(token: &str) -> CliResult<OmegaMode> {
    if token.trim() == "auto" {
        Ok(OmegaMode::Auto)
    } else {
        Ok(OmegaMode::Explicit(parse_phase(token)?))
    }
}
