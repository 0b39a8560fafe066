use thiserror::Error;

use crate::group::GroupModel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group model mismatch: {left} vs {right}")]
    ModelMismatch { left: GroupModel, right: GroupModel },
    #[error("invalid group model: {0}")]
    InvalidModel(String),
    #[error("kernel coefficient {0} is not an integer; Z_n kernels need integer scalars")]
    NonIntegerCoefficient(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty prefix")]
    EmptyPrefix,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("universe of size {size} exceeds the enumeration cap {cap}")]
    UniverseTooLarge { size: u64, cap: usize },
    #[error("enumeration of {needed} sequences exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid lacunary scheme: {0}")]
    InvalidScheme(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
