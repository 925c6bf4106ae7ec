use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("complements regime required (rho < 0), got rho = {0}")]
    ComplementsRequired(f64),

    #[error("requires diminishing idea returns (phi < 1), got phi = {0}")]
    DiminishingReturnsRequired(f64),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("unknown reproduce target `{0}`")]
    UnknownTarget(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot write output directory {path}: {source}")]
    OutputDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownModel(_) | Error::UnknownTarget(_) => 2,
            Error::InvalidParameter { .. }
            | Error::Config(_)
            | Error::ComplementsRequired(_)
            | Error::DiminishingReturnsRequired(_) => 3,
            Error::OutputDir { .. } => 4,
            _ => 1,
        }
    }

    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.to_string(),
            reason: reason.into(),
        }
    }
}

/// Fails unless `value` is finite and strictly positive.
pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {value}")))
    }
}

/// Fails unless `value` lies in the open unit interval.
pub(crate) fn ensure_fraction(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in (0, 1), got {value}")))
    }
}
