use thiserror::Error;

use crate::model::ValidationErrors;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch, {left_name} is {}x{} but {right_name} is {}x{}", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left_name: &'static str,
        left: (usize, usize),
        right_name: &'static str,
        right: (usize, usize),
    },

    #[error("{op}: expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("expected {expected} entries for the given shape, got {got}")]
    EntryCount { expected: usize, got: usize },

    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFinite { row: usize, col: usize, value: f64 },

    #[error("numerical overflow in {context}")]
    Overflow { context: String },

    #[error("singular matrix encountered in {op}")]
    Singular { op: &'static str },

    #[error("matrix is not symmetric: asymmetry {asymmetry:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { asymmetry: f64, tolerance: f64 },

    #[error("matrix is indefinite: pivot {pivot:e} at index {index}")]
    Indefinite { index: usize, pivot: f64 },

    #[error(transparent)]
    Validation(#[from] ValidationErrors),

    #[error("invalid option: {0}")]
    InvalidOption(String),

    #[error("oracle integration diverged at step {step}")]
    Divergence { step: usize },

    #[error("at least 2 samples are required, got {0}")]
    TooFewSamples(usize),
}

impl Error {
    /// True for failures that come from floating-point arithmetic rather
    /// than malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Overflow { .. }
                | Error::Singular { .. }
                | Error::Indefinite { .. }
                | Error::Divergence { .. }
        )
    }
}
