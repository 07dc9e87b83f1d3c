use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid field modulus: {0}")]
    BadModulus(String),
    #[error("field of order {p}^{k} is too large")]
    FieldTooLarge { p: u64, k: usize },
    #[error("polynomial is reducible")]
    Reducible,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("field mismatch")]
    FieldMismatch,
    #[error("geometry mismatch")]
    GeometryMismatch,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular matrix")]
    Singular,
    #[error("determinant is not a unit Laurent monomial")]
    NotUnimodular,
    #[error("periodic degree sequence")]
    PeriodicDegrees,
    #[error("invalid band data: {0}")]
    InvalidBand(String),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("decomposition failed: {0}")]
    Decomposition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
