use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("tower context mismatch: {0}")]
    ContextMismatch(String),
    #[error("tower depth cap ({0}) exceeded")]
    TowerDepthExceeded(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("projective matrix is not self-transposed")]
    NotSelfTransposed,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("tuple does not generate the full matrix algebra")]
    NotGenerating,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("polynomial degree cap ({0}) exceeded")]
    DegreeCapExceeded(usize),
    #[error("polynomial term cap ({0}) exceeded")]
    TermCapExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
