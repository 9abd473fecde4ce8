use thiserror::Error;

use crate::words::Composition;

/// Errors raised by the toolkit.
///
/// `Parse` is a malformed literal (a usage problem); every other variant is a
/// domain-level failure on well-formed input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent composition {0} is not allowed here")]
    Divergent(Composition),

    #[error("insufficient relations: coordinates {free:?} remain free for {target}")]
    InsufficientRelations {
        target: Composition,
        free: Vec<Composition>,
    },

    #[error("precision too low: {digits} digits given, at least {required} needed")]
    PrecisionTooLow { digits: u32, required: u32 },

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed user input rather than the math.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
