use crate::quad::QuadError;

/// Failures surfaced by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Parameters violate a precondition.
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Quadrature stopped short of its tolerance.
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    /// A computation produced non-finite or unstable values.
    #[error("numerical failure: {0}")]
    Numeric(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}
