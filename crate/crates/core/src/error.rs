use std::path::PathBuf;
use thiserror::Error;

/// Errors produced by simulation, analysis and estimation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A scalar parameter violated its documented range.
    #[error("{name} = {value} out of range: {constraint}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Innovation moments do not form a valid 2x2 covariance matrix.
    #[error("invalid innovation spec: {0}")]
    InvalidInnovationSpec(String),

    /// Input data is constant, empty, or otherwise carries no usable signal.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Log-log fit rejected because the fitted values do not share a
    /// dominant sign (the tail is noise, not a one-sided power law).
    #[error("sign instability: {0}")]
    SignInstability(String),

    /// Fewer usable points than the fit requires.
    #[error("insufficient points: {0}")]
    InsufficientPoints(String),

    /// An iterative special-function evaluation did not converge.
    #[error("convergence failure: {0}")]
    ConvergenceFailure(String),

    /// Malformed file content.
    #[error("parse error in {path} (line {line}): {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// File I/O failure with path context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
