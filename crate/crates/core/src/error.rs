use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("empty matrix or tensor: {0}")]
    Empty(String),

    #[error("index {index} out of range (size {size})")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("compound order {m} out of range for a {rows}x{cols} matrix")]
    CompoundOrder { m: usize, rows: usize, cols: usize },

    #[error("k-rank refused: {cols} columns exceeds the column cap {cap}")]
    ColumnCapExceeded { cols: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("singular value decomposition failed to converge ({rows}x{cols})")]
    DecompositionFailed { rows: usize, cols: usize },

    #[error("equivalent bound forms disagree for {what} at R = {rank}")]
    InternalInconsistency { what: String, rank: usize },

    #[error("tensor does not have symmetric frontal slices")]
    NotSfs,

    #[error("alternating least squares diverged at iteration {0}")]
    Diverged(usize),
}

impl Error {
    /// True for failures of the numerical kernels, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DecompositionFailed { .. }
                | Error::Diverged(_)
                | Error::InternalInconsistency { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
