use thiserror::Error;

/// Errors raised by model validation, parsing and the solvers.
///
/// Every index carried by a variant is 1-based, matching the external formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Malformed(String),

    #[error("{matrix}: entry #{position} ({row}, {col}) is outside the {rows}x{cols} pattern")]
    OutOfBounds {
        matrix: String,
        position: usize,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("{matrix}: entry #{position} ({row}, {col}) is duplicated")]
    DuplicateEntry {
        matrix: String,
        position: usize,
        row: usize,
        col: usize,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} is {reason}")]
    BadIndex { index: usize, reason: &'static str },

    #[error("no matching saturates the required vertices; Hall violator {violator:?} has only {neighbours} neighbours")]
    Unsaturable {
        violator: Vec<String>,
        neighbours: usize,
    },

    #[error("input matrix has generic rank {rank} < {q}")]
    RankDeficientInputs { rank: usize, q: usize },

    #[error("brute force refused: {candidates} candidate positions exceed the cap of {cap}")]
    CapExceeded { candidates: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("infeasible: {0}")]
    Infeasible(String),
}

impl Error {
    /// True for errors caused by the input document rather than by a solver.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Malformed(_)
                | Error::OutOfBounds { .. }
                | Error::DuplicateEntry { .. }
                | Error::DimensionMismatch(_)
                | Error::BadIndex { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
