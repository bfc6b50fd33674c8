use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, OhitError>;

#[derive(Debug, Error)]
pub enum OhitError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("line {line}: cannot parse value {value:?} as a number")]
    Parse { line: usize, value: String },

    #[error("input contains no samples")]
    EmptyInput,

    #[error("degenerate class split: {0}")]
    DegenerateSplit(String),

    #[error("insufficient data: need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("degenerate evaluation: {0}")]
    DegenerateEvaluation(String),

    #[error("report format: {0}")]
    Report(String),
}

impl OhitError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        OhitError::Io {
            path: path.into(),
            source,
        }
    }
}
