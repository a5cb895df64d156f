//! Optional JSON configuration file. Flags always win over file values,
//! which win over built-in defaults.

use crate::errors::{CliError, CliResult};
use serde::Deserialize;
use std::path::Path;

/// Partial run configuration; every field is optional so a file can set
/// only what it cares about. Phase values are the same tokens the flags
/// accept (`"pi"`, `"0.5pi"`, `"2.34997"`).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<u64>,
    pub m: Option<u64>,
    pub omega: Option<String>,
    pub phases: Option<Vec<String>>,
    pub iters: Option<u64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub p_threshold: Option<f64>,
    pub extra_iterations: Option<u64>,
    pub scan_horizon_factor: Option<u64>,
    pub z_grid: Option<usize>,
    pub p_phi: Option<f64>,
    pub sweep_from: Option<u64>,
    pub sweep_to: Option<u64>,
    pub sweep_step: Option<u64>,
    pub draws: Option<u64>,
    pub out: Option<String>,
    pub json_out: Option<String>,
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}

/// Flag-over-file-over-default resolution.
pub fn pick<T: Clone>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

pub fn pick_opt<T: Clone>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}
