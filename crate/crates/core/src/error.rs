use thiserror::Error;

/// Largest cyclic degree accepted by [`crate::cover::validate`].
pub const MAX_DEGREE: i64 = 1_000_000;

/// Errors raised by datum validation and by the invariant computations.
///
/// Every message starts with the variant name so that command-line users can
/// grep for the failure kind.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("DegreeTooSmall: degree {n} must be at least 2")]
    DegreeTooSmall { n: i64 },

    #[error("DegreeTooLarge: degree {n} exceeds the supported bound {MAX_DEGREE}")]
    DegreeTooLarge { n: i64 },

    #[error("NegativeGenus: base genus {s} is negative")]
    NegativeGenus { s: i64 },

    #[error("MultiplicityOutOfRange: u_{index} = {value} is not in [1, {max}]")]
    MultiplicityOutOfRange { index: usize, value: i64, max: i64 },

    #[error("SumNotDivisible: sum of multiplicities {sum} is not divisible by n = {n}")]
    SumNotDivisible { sum: i128, n: i64 },

    #[error(
        "Disconnected: over a rational base the multiplicities must generate Z/{n} \
         (gcd(n, u_1, ..., u_r) = {gcd})"
    )]
    Disconnected { n: i64, gcd: i64 },

    #[error("IndexOutOfRange: branch index {index} is not in [1, {r}]")]
    IndexOutOfRange { index: usize, r: usize },

    #[error("CharacterOutOfRange: character {i} is not in [{min}, {max}]")]
    CharacterOutOfRange { i: i64, min: i64, max: i64 },

    #[error("NotADivisor: {m} does not divide {n}")]
    NotADivisor { m: i64, n: i64 },

    #[error("NotUnitBranch: closed form requires every multiplicity to be 1")]
    NotUnitBranch,

    #[error("DegreeNotPositive: fiber degree of L^({i}) is {degree}, Riemann-Roch oracle inapplicable")]
    DegreeNotPositive { i: i64, degree: String },

    #[error("NotPrime: degree {n} is not prime")]
    NotPrime { n: i64 },

    #[error("PrimeTooSmall: prime {p} is smaller than {min}")]
    PrimeTooSmall { p: i64, min: i64 },

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),

    #[error("WrongShape: {0}")]
    WrongShape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
