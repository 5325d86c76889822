use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0}: argument must be nonzero")]
    Zero(&'static str),
    #[error("modulus must be odd and positive, got {0}")]
    EvenModulus(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {p}^{k} exceeds the enumeration limit {limit}")]
    ModulusTooLarge { p: u64, k: u32, limit: u64 },
    #[error("bound {bound} exceeds the configured maximum {max}")]
    BoundTooLarge { bound: u64, max: u64 },
    #[error("coefficient {0} is outside 1..=2^32")]
    Coefficient(u64),
    #[error("variable {0} is outside -2^20..=2^20")]
    Variable(i64),
    #[error("unknown shortcut `{0}`")]
    UnknownShortcut(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
