//! Crate-wide error type.

use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors the toolkit can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", path.display())]
    FileNotFound { path: PathBuf },

    #[error("column `{column}` not found in CSV header")]
    SchemaMismatch { column: String },

    #[error("row {row}: cannot parse {field} value `{value}`")]
    BadRow {
        row: usize,
        field: &'static str,
        value: String,
    },

    #[error("timestamp `{value}` at index {index} is not an ISO-8601 date or datetime")]
    BadTimestamp { index: usize, value: String },

    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("timestamps not strictly increasing at index {index}")]
    NonMonotoneTimestamps { index: usize },

    #[error("series too short: need at least {need} points, got {got}")]
    SeriesTooShort { need: usize, got: usize },

    #[error("negative threshold tau = {0}")]
    NegativeTau(f64),

    #[error("window {window} out of range [2, {max}]")]
    WindowOutOfRange { window: usize, max: usize },

    #[error("degenerate scaler: min and max both equal {0}")]
    DegenerateScaler(f64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("training loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("non-finite feature value at sample {sample}, column {column}")]
    NonFiniteFeature { sample: usize, column: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("short window {short} must be smaller than long window {long}")]
    WindowOrder { short: usize, long: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unreadable {what} file: {detail}")]
    BadFormat { what: &'static str, detail: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Wrap an I/O error with a short description of what was attempted.
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
