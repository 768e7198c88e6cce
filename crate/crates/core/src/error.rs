use thiserror::Error;

/// Errors raised by the symbolic engine and the numerical oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("capacity exceeded: {what} is {actual}, cap is {cap}")]
    Capacity {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("odd number of legs ({legs}) in term {term}; Wick contraction needs an even count")]
    Parity { term: String, legs: usize },

    #[error("wire format error: {0}")]
    Wire(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub(crate) fn domain(message: impl Into<String>) -> Self {
        Error::Domain(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
