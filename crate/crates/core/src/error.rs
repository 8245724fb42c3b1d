use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("fixed-point solver did not converge after {iterations} iterations (last residual {residual:.3e}) at z = {z}")]
    Solver {
        iterations: usize,
        residual: f64,
        z: String,
    },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("contour singularity: {0}")]
    Singularity(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("replicate {replicate} (seed {seed}) failed: {source}")]
    Replicate {
        replicate: usize,
        seed: u64,
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
