use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank {rank} is out of range for type {lie_type}")]
    RankOutOfRange { lie_type: char, rank: usize },
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("zero root")]
    ZeroRoot,
    #[error("not a root of the system: {0:?}")]
    NotARoot(Vec<i64>),
    #[error("roots are proportional")]
    ProportionalRoots,
    #[error("unsupported Levi subset {0:?}")]
    UnsupportedLevi(Vec<usize>),
    #[error("weight {mu:?} is not below {lambda:?}")]
    NotDominated { lambda: Vec<i64>, mu: Vec<i64> },
    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("{0} is not 0 or a prime")]
    InvalidCharacteristic(u64),
    #[error("weight {weight:?} is not {p}-restricted")]
    NotRestricted { weight: Vec<i64>, p: u64 },
    #[error("characteristic 2 is not supported for type B here")]
    CharacteristicTwoTypeB,
    #[error("height {height} exceeds the budget {limit}")]
    HeightBudget { height: i64, limit: i64 },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
