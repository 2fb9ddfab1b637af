use crate::field::Field;

/// Errors produced by the algebra engine.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("characteristic 2 is not allowed: the base field must have characteristic different from 2")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 2^31)")]
    PrimeTooLarge(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("denominator {0} is not invertible over {1}")]
    NotInvertible(String, Field),
    #[error("degenerate bilinear form")]
    DegenerateForm,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid Lie algebra: {0}")]
    InvalidAlgebra(String),
    #[error("endomorphism is not in the image of S")]
    NotInImage,
    #[error("the Lie algebra has a center of dimension {0}; ker T is only computed for centerless algebras")]
    NontrivialCenter(usize),
    #[error("well-definedness check failed: {0}")]
    WellDefinedness(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
