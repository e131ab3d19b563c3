use thiserror::Error;

/// Errors produced by the enhancement library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A model fit has no valid parameters for the given data (zero mean, zero variance).
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    /// A metric could not be computed, e.g. every scoring frame was silent.
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
