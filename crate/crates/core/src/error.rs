use thiserror::Error;

/// Errors raised by the bounds library and its command front end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical minimization failed to produce a finite value.
    #[error("optimizer did not converge (best value found: {best})")]
    NoConvergence { best: f64 },

    /// A configuration value failed validation.
    #[error("invalid value for `{field}`: {reason}")]
    Config { field: String, reason: String },

    /// A scenario geometry produced an unusable channel.
    #[error("scenario rejected: {0}")]
    Rejected(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than numerics or I/O.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Config { .. } | Error::Rejected(_) | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
