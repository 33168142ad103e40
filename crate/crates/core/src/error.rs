use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Matrix dimensions do not fit the operation.
    #[error("dimension error: {0}")]
    Dimension(String),
    /// Input has the wrong shape (e.g. asymmetric where symmetry is required).
    #[error("shape error: {0}")]
    Shape(String),
    /// Input is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured enumeration bound was exceeded.
    #[error("resource bound exceeded: {0}")]
    Resource(String),
    /// Malformed textual or serialized input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resource<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resource(msg.into()))
}
