use thiserror::Error;

/// Errors raised across the library. The variant name doubles as the
/// diagnostic token printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InvalidDimension: dimension {0} must be at least 2 and at most 2^31")]
    InvalidDimension(u64),
    #[error("NotInvertible: {a} has no inverse modulo {m}")]
    NotInvertible { a: u64, m: u64 },
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("IndexOutOfRange: qudit {index} on {n} qudits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("IdentityOnPart: Pauli product acts as identity on the requested part")]
    IdentityOnPart,
    #[error("NonPrimeD: operation requires a prime dimension, got {0}")]
    NonPrimeD(u64),
    #[error("NotSquarefree: dimension {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("InvalidStabilizer: {0}")]
    InvalidStabilizer(String),
    #[error("NotSubgroup: {0}")]
    NotSubgroup(String),
    #[error("NotAState: group has the wrong size for a stabilizer state on {0} qudits")]
    NotAState(usize),
    #[error("NotCoprime: {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error("InternalInvariant: {0}")]
    InternalInvariant(String),
    #[error("InvalidCode: {0}")]
    InvalidCode(String),
    #[error("NotMaximallyMixedInput: reduced state on the input qudits has rank {rank}, expected {expected}")]
    NotMaximallyMixedInput { rank: u128, expected: u128 },
    #[error("TooLarge: dense dimension {0} exceeds the oracle limit")]
    TooLarge(u128),
    #[error("NotRankOne: {0}")]
    NotRankOne(String),
    #[error("InvalidPartition: {0}")]
    InvalidPartition(String),
    #[error("Parse: line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    /// The bare variant name, e.g. `NotSquarefree`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::NotInvertible { .. } => "NotInvertible",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::IdentityOnPart => "IdentityOnPart",
            Error::NonPrimeD(_) => "NonPrimeD",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::InvalidStabilizer(_) => "InvalidStabilizer",
            Error::NotSubgroup(_) => "NotSubgroup",
            Error::NotAState(_) => "NotAState",
            Error::NotCoprime(..) => "NotCoprime",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::InternalInvariant(_) => "InternalInvariant",
            Error::InvalidCode(_) => "InvalidCode",
            Error::NotMaximallyMixedInput { .. } => "NotMaximallyMixedInput",
            Error::TooLarge(_) => "TooLarge",
            Error::NotRankOne(_) => "NotRankOne",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
