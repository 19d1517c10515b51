use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("singular reduction modulo {0}")]
    SingularReduction(u64),
    #[error("point has finite order")]
    Torsion,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("no Table 1 row matches (z, w) = ({z}, {w})")]
    NoTableRow { z: String, w: String },
    #[error("newform data: {0}")]
    Data(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
