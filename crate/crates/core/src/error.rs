use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("exchange matrix is not skew-symmetric at ({0}, {1})")]
    NotSkewSymmetric(usize, usize),

    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: String },

    #[error("column {column} has mixed signs")]
    MixedSigns { column: usize },

    #[error("column {column} is zero")]
    ZeroColumn { column: usize },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("column {column} of the Δ-matrix is not a unit vector of the completion sign")]
    NotUnitColumn { column: usize },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no sign-unit weight reached within depth {max_depth} ({explored} states explored)")]
    NotReachable { max_depth: usize, explored: usize },

    #[error("quiver has an oriented cycle")]
    CyclicQuiver,

    #[error("presentations live over different path algebras")]
    AlgebraMismatch,

    #[error("presentation too large: multiplicity {total} exceeds cap {cap}")]
    TooLarge { total: usize, cap: usize },

    #[error("no valid lift coefficient in [0, {0}]")]
    NotFound(usize),

    #[error("arrow convention mismatch: {0}")]
    ConventionMismatch(String),
}

pub(crate) fn check_index(index: usize, size: usize) -> Result<()> {
    if index < size {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, size })
    }
}
