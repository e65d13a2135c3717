use thiserror::Error;

/// Errors produced anywhere in the crate.
///
/// Each variant maps onto one of a handful of process exit classes
/// (see [`Error::class`]), which the command-line front end uses directly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} rows but row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix is not skew-symmetrizable: entries ({i},{j}) = {bij} and ({j},{i}) = {bji}")]
    NotSkewSymmetrizable { i: usize, j: usize, bij: i64, bji: i64 },

    #[error("{d:?} does not skew-symmetrize the matrix")]
    BadSymmetrizer { d: Vec<i64> },

    #[error("index {index} out of range for rank {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("sign-coherence violated at step {step}: c-vector {column} is {vector:?}")]
    SignCoherenceViolation { step: usize, column: usize, vector: Vec<i64> },

    #[error("integer overflow in exact matrix arithmetic")]
    IntegerOverflow,

    #[error("exponent {0} exceeds the overflow guard")]
    ExponentOverflow(f64),

    #[error("polynomial exceeds the term limit of {limit} monomials")]
    TermLimit { limit: usize },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("argument {value} outside the domain of {function}")]
    Domain { function: &'static str, value: f64 },

    #[error("point is not on the small phase space (max deviation {deviation:e})")]
    NotOnM0 { deviation: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("periodicity checks disagree: {0}")]
    PeriodicityDisagreement(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification of an [`Error`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Resource,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::TermLimit { .. }
            | Error::ResourceLimit(_)
            | Error::ExponentOverflow(_)
            | Error::IntegerOverflow => ErrorClass::Resource,
            Error::SignCoherenceViolation { .. }
            | Error::PeriodicityDisagreement(_)
            | Error::Invariant(_) => ErrorClass::Internal,
            _ => ErrorClass::Input,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
