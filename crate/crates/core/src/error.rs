use thiserror::Error;

/// Failures of the analytic engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular parameters: {0}")]
    SingularParameters(String),
    #[error("parameters outside the stability domain")]
    Unstable,
    #[error("moment order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("parameters are not on the exceptional-point line (|G1+G2-2J| = {offset:e})")]
    NotAtEP { offset: f64 },
    #[error("ensemble weights sum to {sum}, expected 1")]
    UnnormalizedEnsemble { sum: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
