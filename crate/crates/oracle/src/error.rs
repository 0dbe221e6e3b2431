use thiserror::Error;

/// Failures of the Fock-space oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Model(#[from] ptdimer_core::Error),
    #[error("cutoff too small: {0}")]
    CutoffTooSmall(String),
    #[error("parameters outside the stability domain: no normalizable steady state")]
    Unstable,
    #[error("divergence detected at t = {time} ({reason})")]
    DivergenceDetected { time: f64, reason: String },
    #[error("solver did not converge: {0}")]
    NotConverged(String),
    #[error("dump format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;
