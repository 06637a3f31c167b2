use thiserror::Error;

use crate::classical::Trajectory;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error for key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// A numerical procedure stopped before reaching its tolerance.
    #[error("{what} did not converge (achieved estimate {estimate:e}, residual {residual:e})")]
    NonConvergence {
        what: String,
        estimate: f64,
        residual: f64,
    },

    /// The orbit integrator gave up; the samples accepted so far are kept.
    #[error("integration failed at tau = {tau}: {reason}")]
    IntegrationFailure {
        tau: f64,
        reason: String,
        partial: Box<Trajectory>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical procedure (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::IntegrationFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
