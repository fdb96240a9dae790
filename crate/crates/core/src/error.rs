use thiserror::Error;

/// Errors raised by every module of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("NotADistribution: {0}")]
    NotADistribution(String),

    #[error("PositionOutOfRange: position {position} is not in 0..{n}")]
    PositionOutOfRange { position: usize, n: usize },

    #[error("InvalidAssignment: {0}")]
    InvalidAssignment(String),

    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),

    #[error("InfeasibleEnumeration: {what} needs {needed} entries, guard is {limit}")]
    InfeasibleEnumeration {
        what: &'static str,
        needed: f64,
        limit: f64,
    },

    #[error("HanViolation: Z_{index} = {value} after Z_{prev_index} = {prev_value}")]
    HanViolation {
        index: usize,
        value: f64,
        prev_index: usize,
        prev_value: f64,
    },

    #[error("InvalidTolerance: {0}")]
    InvalidTolerance(String),

    #[error("NonMonotoneNodes: {0}")]
    NonMonotoneNodes(String),

    #[error("InvalidSchedule: {0}")]
    InvalidSchedule(String),

    #[error("InvalidPartition: {0}")]
    InvalidPartition(String),

    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),

    #[error("RankDeficient: generator has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },

    #[error("DuplicateEvalPoints: evaluation point {0} repeats")]
    DuplicateEvalPoints(u64),

    #[error("FieldTooSmall: {0}")]
    FieldTooSmall(String),

    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// True for the enumeration guards (the CLI maps these to exit code 3).
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::InfeasibleEnumeration { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
