use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A spec or parameter failed its construction-time validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation precondition was not met.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A quadrature did not converge; carries the last two estimates.
    #[error("quadrature did not converge: last estimates {previous} and {current}")]
    QuadratureNonConvergence { previous: f64, current: f64 },

    /// A search loop did not converge; carries the bracketing values.
    #[error("search did not converge: bracket [{low}, {high}]")]
    SearchNonConvergence { low: f64, high: f64 },

    /// A simulated quantity left its admissible range.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Configuration file could not be parsed or failed validation.
    #[error("config error: {0}")]
    Config(String),

    #[error("unknown check {name:?}; valid names: {valid}")]
    UnknownCheck { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
