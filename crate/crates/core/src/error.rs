use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is too small; need n >= 3")]
    ModulusTooSmall(u64),

    #[error("{0} is not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("prime {p} divides the discriminant {disc}")]
    Ramified { p: u64, disc: i64 },

    #[error("value {0} is outside the supported machine-word range")]
    OutOfRange(String),

    #[error(
        "no squarefree characteristic polynomial for the index-{degree} subfield of \
         Q(zeta_{n}) after {attempts} generator shapes"
    )]
    NoPrimitiveElement { n: u64, degree: u64, attempts: usize },

    #[error("subgroup belongs to modulus {found}, expected {expected}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error(transparent)]
    Backend(#[from] crate::normsearch::BackendError),

    #[error("fixture {name}: {message}")]
    Fixture { name: String, message: String },
}
