use thiserror::Error;

/// Errors raised by the arithmetic, character and solver layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value out of supported range: {0}")]
    Range(String),
    #[error("{value} is not a unit modulo {modulus}")]
    NonUnit { value: String, modulus: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed character: {0}")]
    MalformedCharacter(String),
    #[error("no witness exists: {0}")]
    NoWitness(String),
    #[error("search cap {cap} exceeded: {what}")]
    SearchCap { cap: u64, what: String },
    #[error("nothing found below cap {cap}: {what}")]
    NotFoundBelowCap { cap: u64, what: String },
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
