use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("lattice dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("basis vectors are linearly dependent")]
    Singular,

    #[error("entry {value} exceeds the supported magnitude {limit}")]
    EntryTooLarge { value: i64, limit: i64 },

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i128),

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("{what} {value} is outside [{lo}, {hi}]")]
    OutOfRange { what: &'static str, value: i64, lo: i64, hi: i64 },

    #[error("{what} needs {needed} but the budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
