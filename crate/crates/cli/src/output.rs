//! Output plumbing: metadata headers, stdout-or-file writers, and the
//! default output directory.
//!
//! Every CSV opens with commented metadata lines carrying the tool version
//! and the fully resolved configuration, so any output file is
//! self-describing. No timestamps anywhere; reruns are byte-identical.

use crate::errors::CliResult;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable naming the default directory for commands that
/// write files when no explicit path is given.
pub const OUT_DIR_ENV: &str = "GROVER_MULTIPHASE_OUT";

pub fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Explicit path when given, otherwise `default_name` inside the default
/// output directory.
pub fn resolve_path(explicit: Option<&Path>, default_name: &str) -> PathBuf {
    match explicit {
        Some(p) => p.to_path_buf(),
        None => out_dir().join(default_name),
    }
}

/// Writer to the given file, or stdout when no path is given.
pub fn stdout_or_file(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

pub fn file_writer(path: &Path) -> CliResult<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Commented metadata block: tool version, command, then one line per
/// resolved configuration entry.
pub fn write_metadata<W: Write>(
    out: &mut W,
    command: &str,
    entries: &[(&str, String)],
) -> CliResult<()> {
    writeln!(out, "# grover-multiphase {VERSION}")?;
    writeln!(out, "# command: {command}")?;
    for (key, value) in entries {
        writeln!(out, "# {key} = {value}")?;
    }
    Ok(())
}

pub fn join_phases(phases: &[f64]) -> String {
    phases
        .iter()
        .map(|p| p.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
