use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order relation has a cycle through `{0}`")]
    CycleDetected(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("ideal lattice exceeded the node budget of {budget} (reached {reached} nodes)")]
    BudgetExceeded { budget: usize, reached: usize },
    #[error("grid closure exceeded the size budget of {budget} cells")]
    SizeBudgetExceeded { budget: usize },
    #[error("point {index} has arity {found}, expected {expected}")]
    ArityMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("conditioning event has probability zero")]
    ConditionNullEvent,
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("elements `{0}` and `{1}` are comparable")]
    ComparablePair(String, String),
    #[error("invalid decomposition: {0}")]
    DecompositionInvalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}
