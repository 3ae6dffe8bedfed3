use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    Domain {
        argument: &'static str,
        message: String,
    },
    /// Two matrices cannot be combined because their shapes disagree.
    Shape(String),
    /// The request is legal but would not fit in memory or machine indices.
    TooLarge(String),
    /// A proven identity failed to hold. This always indicates a bug in the
    /// operator construction or in the exact linear algebra.
    Integrity(String),
}

impl Error {
    pub(crate) fn domain(argument: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            argument,
            message: message.into(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { argument, message } => write!(f, "invalid `{argument}`: {message}"),
            Error::Shape(msg) => write!(f, "shape mismatch: {msg}"),
            Error::TooLarge(msg) => write!(f, "too large: {msg}"),
            Error::Integrity(msg) => write!(f, "integrity check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
