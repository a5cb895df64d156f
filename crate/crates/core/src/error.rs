//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by simulation, sampling, and fitting routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Register shape violates `1 <= m < n`.
    #[error("invalid register shape: n = {n}, m = {m} (need 1 <= m < n)")]
    InvalidShape { n: u64, m: u64 },

    /// A phase list does not match the number of solutions of the run.
    #[error("phase count mismatch: expected {expected} oracle phases, got {got}")]
    PhaseCountMismatch { expected: usize, got: usize },

    /// State and matrix dimensions disagree.
    #[error("dimension mismatch: state has {state} amplitudes, matrix is {matrix}x{matrix}")]
    DimensionMismatch { state: usize, matrix: usize },

    /// An inverse trigonometric argument left its domain by more than the
    /// rounding guard.
    #[error("arcsin/arccos argument {value} out of [-1, 1] for n = {n}, m = {m}")]
    TrigDomain { value: f64, n: u64, m: u64 },

    /// An operation that needs a non-empty trace received an empty one.
    #[error("empty trace")]
    EmptyTrace,

    /// A fit was asked to run on fewer points than it can support.
    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Too few trace points relative to the number of fit parameters.
    #[error("fit window too short: {points} points for {params} parameters")]
    FitWindowTooShort { points: usize, params: usize },

    /// No iteration-jump register was found inside the search window.
    #[error("no boundary register found {direction} n = {n} (m = {m})")]
    BoundarySearch {
        n: u64,
        m: u64,
        direction: &'static str,
    },

    /// Every sample of a robustness scan failed its fit.
    #[error("robustness scan failed: no usable sample out of {total}")]
    ScanFailure { total: usize },

    /// The full-basis reference path is capped to keep memory bounded.
    #[error("register size {n} exceeds the full-basis reference cap {cap}")]
    ReferenceTooLarge { n: u64, cap: u64 },

    /// Solution indices passed to the full-basis path are invalid.
    #[error("invalid solution indices: {reason}")]
    InvalidSolutions { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
