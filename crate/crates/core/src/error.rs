use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid graded space: {0}")]
    InvalidSpace(String),

    #[error("basis index {index} out of range for a space of dimension {dim}")]
    InvalidBasisIndex { index: usize, dim: usize },

    #[error("cochains live on different graded spaces")]
    SpaceMismatch,

    #[error("cochain has no component of arity {found} (arities present: {present:?})")]
    ArityMismatch { found: usize, present: Vec<usize> },

    #[error("operation needs a cochain homogeneous in arity and parity")]
    Inhomogeneous,

    #[error("cochain is not in bidegree {expected}: found a term in {found}")]
    WrongBidegree { expected: String, found: String },

    #[error("cochain must be {expected}")]
    WrongParity { expected: &'static str },

    #[error("linear map is singular")]
    Singular,

    #[error("linear map mixes M and W")]
    NotBlockDiagonal,

    #[error("linear map does not preserve parity")]
    ParityViolating,

    #[error("image of the coboundary operator leaves the requested codomain (term {0})")]
    InconsistentPiece(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid extension: {0}")]
    InvalidExtension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
