use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("level mismatch: {0} vs {1}")]
    LevelMismatch(u64, u64),
    #[error("exponent {0} is not coprime to level {1}")]
    NotCoprime(u64, u64),
    #[error("element is not integral")]
    NotIntegral,
    #[error("the zero element has an infinite quotient")]
    ZeroQuotient,
    #[error("malformed complex: {0}")]
    MalformedComplex(String),
    #[error("degree {0} outside [{1}, {2}]")]
    DegreeOutOfRange(i64, i64, i64),
    #[error("term at degree {0} is infinite")]
    InfiniteTerm(i64),
    #[error("invalid Mackey data: {0}")]
    InvalidMackey(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("pole at the evaluation point")]
    Pole,
    #[error("no recurrence of the allowed order fits the series")]
    InsufficientOrder,
    #[error("f vanishes at the point")]
    Ramified,
}

pub type Result<T> = std::result::Result<T, Error>;
