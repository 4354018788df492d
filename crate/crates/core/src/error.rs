use serde::Serialize;
use thiserror::Error;

/// Errors raised by the algebraic engines (Boolean algebras, models,
/// syntactic categories, the adjunction checker and the brain simulator).
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum Error {
    #[error("fragment violation: {0}")]
    FragmentViolation(String),
    #[error("capacity exceeded: {what} needs {needed}, bound is {bound}")]
    CapacityExceeded { what: String, needed: u128, bound: u128 },
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("no normalizer registered for theory `{0}`")]
    NoNormalizer(String),
    #[error("rewriting did not terminate within {0} steps")]
    NonTerminating(usize),
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
}

impl Error {
    pub(crate) fn capacity(what: impl Into<String>, needed: u128, bound: u128) -> Self {
        Error::CapacityExceeded { what: what.into(), needed, bound }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
