use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ideal spec: {0}")]
    InvalidSpec(String),
    #[error("algebra dimension {dim} exceeds the cap of {cap}")]
    DimensionCapExceeded { dim: u128, cap: usize },
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("ambient dimensions differ ({left} vs {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("generator images do not respect the relation {relation}")]
    IllDefined { relation: String },
    #[error("index error: {0}")]
    IndexError(String),
    #[error("search space of {needed} candidates exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("enumerated set is not a group: {0}")]
    NotAGroup(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
