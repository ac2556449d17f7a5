use thiserror::Error;

/// Errors produced by the toolkit's operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum EcaError {
    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested evaluation point lies at or beyond a finite-time singularity.
    #[error("blow-up: m = {m} is not before the blow-up time {blow_up_time}")]
    BlowUp { m: f64, blow_up_time: f64 },

    /// Numerical parameters violate a stability condition.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Not enough usable data points for an estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, EcaError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(EcaError::Domain(msg.into()))
}
