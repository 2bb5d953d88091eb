use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The caller supplied arguments outside an operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Two independent computation routes disagreed. Always a bug.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    /// The request is well-formed but exceeds the configured resource limits.
    #[error("infeasible at this scale: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
