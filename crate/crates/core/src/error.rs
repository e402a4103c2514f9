use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a Brieskorn sphere needs at least three exponents, got {0}")]
    TooFewExponents(usize),
    #[error("exponent {0} must be greater than 1")]
    ExponentTooSmall(u64),
    #[error("exponents {0} and {1} are not coprime")]
    NotPairwiseCoprime(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} divides none of the exponents")]
    PrimeDoesNotDivide { p: u64 },
    #[error("prime {p} divides the exponent {exponent}; use the branched-cover path instead")]
    PrimeDividesExponent { p: u64, exponent: u64 },
    #[error("prime {p} divides a*b = {product}")]
    PrimeDividesProduct { p: u64, product: u64 },
    #[error("quotient by Z_{p} has fewer than three exponents > 1")]
    DegenerateBase { p: u64 },
    #[error("scale must be positive")]
    ZeroScale,
    #[error("{0} is not in the semigroup")]
    NotInSemigroup(u64),
    #[error("{n} lies outside [0, {bound}]")]
    OutOfRange { n: u64, bound: BigInt },
    #[error("profile domain {0} is too large to tabulate")]
    ProfileTooLarge(BigInt),
    #[error("unsupported case: {0}")]
    UnsupportedCase(&'static str),
    #[error("reduced module is zero")]
    EmptyReduced,
    #[error("8 does not divide 4*kappa - (a-1)(b-1)(c-1) = {0}")]
    IntegralityViolation(i64),
    #[error("d-invariant {0} is odd")]
    ParityViolation(i64),
    #[error("rank difference {0} is negative")]
    NegativeDifference(i64),
    #[error("branched bound {0} is negative")]
    NegativeBound(i64),
    #[error("cross-check failed: {0}")]
    CrossCheckFailure(String),
    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),
    #[error("Z_{p} acts freely on summand {index}")]
    ActionFreeOnSummand { index: usize, p: u64 },
}
