use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the library. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("matrix must be at least 2x2 for this operation (got {dim}x{dim})")]
    MatrixTooSmall { dim: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(&'static str),
    #[error("entry count {len} does not match {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("submatrix B({index}|{index}) is singular")]
    SingularSubmatrix { index: usize },
    #[error("selector f_ml is undefined for m = l = {index}")]
    SelectorUndefined { index: usize },
    #[error("negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },
    #[error("row {row} sums to more than one")]
    RowSumExceedsOne { row: usize },
    #[error("spectral radius is not less than one")]
    SpectralRadiusNotLessThanOne,
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("matrix is not column substochastic")]
    NotColumnSubstochastic,
    #[error("matrix does not meet the nonzero-minor certificate: {0}")]
    NotCertified(&'static str),
    #[error("no certified instance found within {attempts} attempts")]
    GenerationExhausted { attempts: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(&'static str),
    #[error("not representable as an exact rational")]
    NotRepresentable,
    /// A relation that holds for every valid input was found violated.
    /// Either the input is outside the certified class or there is a bug.
    #[error("invariant violated: {0}")]
    InvariantViolated(&'static str),
}
