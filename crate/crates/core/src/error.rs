use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value lies outside the interval the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// A base, digit, index or count argument is invalid.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// An input does not have the structure the operation requires.
    #[error("contract error: {0}")]
    Contract(String),

    /// A digit sequence is not the image of any point under the transform.
    #[error("not in S_p: position {position} must carry fixed digit {expected}, found {found}")]
    NotInSupport {
        position: BigUint,
        expected: u8,
        found: u8,
    },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
