use std::path::PathBuf;

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum GmviError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid simplex point: {0}")]
    InvalidPoint(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("Watson instance index {0} out of range 1..=10")]
    WatsonIndex(usize),

    #[error("unsupported operator/norm combination: {0}")]
    Unsupported(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    /// An inner prox solve failed. This points at a geometry bug, not bad input.
    #[error("{geometry} prox-mapping failed: {detail}")]
    ProxFailure { geometry: &'static str, detail: String },

    #[error("line search exceeded {trials} trials without satisfying the step condition")]
    LineSearchExhausted { trials: usize },

    #[error("missing constants for the certificate bound: {0}")]
    MissingConstants(&'static str),

    #[error("reference run did not reach the target gap within {budget} prox calls (final gap {final_gap:e})")]
    NonConvergent { budget: usize, final_gap: f64 },

    #[error("every tuning pair diverged on at least one representative instance")]
    AllDiverged { table: Vec<crate::bench::TuningEntry> },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = GmviError> = std::result::Result<T, E>;
