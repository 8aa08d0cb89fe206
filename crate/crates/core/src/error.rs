use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("division by zero in the field")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined (rank {rank} < {cols} columns)")]
    Underdetermined { rank: usize, cols: usize },
    #[error("bad Cauchy points: {0}")]
    BadPoints(String),
    #[error("field too small: need q >= {needed}, got q = {q}")]
    FieldTooSmall { needed: u64, q: u64 },
    #[error("repeated evaluation point {0}")]
    RepeatedPoint(u64),
    #[error("subset enumeration too large: {count} subsets exceed budget {budget}")]
    TooLarge { count: u128, budget: u64 },
    #[error("enumeration budget exceeded: {needed} candidates exceed budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("the row space is the zero code")]
    ZeroCode,
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("generator fails the MDS rows property")]
    MdsViolation,
    #[error("n*d = {0} is odd; a regular graph requires an even product")]
    OddProduct(usize),
    #[error("degree {d} too large for {n} vertices")]
    DegreeTooLarge { n: usize, d: usize },
    #[error("encoding matrix violates independence property: {0}")]
    PropertyViolation(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("wrong helper set: {0}")]
    WrongHelpers(String),
    #[error("helper {helper} supplied a unit for edge {edge}, which it does not share with node {failed}")]
    WrongUnit {
        helper: usize,
        failed: usize,
        edge: usize,
    },
    #[error("expected {expected} helpers, got {got}")]
    WrongHelperCount { expected: usize, got: usize },
    #[error("node {0} already failed")]
    AlreadyFailed(usize),
    #[error("node {0} is not failed")]
    NotFailed(usize),
    #[error("insufficient alive nodes: {0}")]
    InsufficientAlive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
