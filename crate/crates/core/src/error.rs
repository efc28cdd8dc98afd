use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element has {found} coordinates but the group has {expected} cyclic factors")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {value} out of range for factor Z/{order}")]
    CoordinateOutOfRange { value: u64, order: u64 },

    #[error("element index {index} out of range for a group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("cyclic factor orders must be at least 2, got {0}")]
    InvalidFactor(u64),

    #[error("odd order required, group has order {0}")]
    OddOrderRequired(usize),

    #[error("group order {order} exceeds the configured bound {bound}")]
    Capacity { order: usize, bound: usize },

    #[error("operands belong to different groups")]
    ParentMismatch,

    #[error("empty operand in a sumset")]
    EmptyOperand,

    #[error("set is not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("trivial subgroup not allowed here")]
    TrivialSubgroup,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{a} is not invertible modulo {p}")]
    NotInvertible { a: i64, p: u64 },

    #[error("odd prime required, got {0}")]
    OddPrimeRequired(u64),

    #[error("{0} lies in P0: no rainbow-free coloring with nonempty classes exists")]
    PrimeInP0(u64),

    #[error("multiplier {u} is not a unit modulo {n}")]
    NonUnit { u: i64, n: usize },

    #[error("cyclic group required")]
    NotCyclic,

    #[error("group order {0} is a power of 2")]
    PowerOfTwo(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
