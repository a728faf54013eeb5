use thiserror::Error;

/// Errors raised by the library.
///
/// Undecided verdicts (`Unknown`, `Inconclusive`) are ordinary values, not
/// errors; this type only covers invalid input and exhausted resources.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("negative value {0} where a nonnegative rational is required")]
    Negative(String),

    #[error("expected a positive value, got {0}")]
    NotPositive(String),

    #[error("cannot parse {input:?} as a rational: {reason}")]
    Parse { input: String, reason: String },

    #[error("empty generator list")]
    EmptyGenerators,

    #[error("not cofinite: generators have gcd {0}, divide it out first")]
    NotCofinite(u64),

    #[error("{0} is not an element of the monoid")]
    NotAnElement(String),

    #[error("{what} too large for exact lattice computation ({size})")]
    LatticeTooLarge { what: &'static str, size: String },

    #[error("enumeration budget exceeded: {detail}")]
    Budget { detail: String },

    #[error("the monoid has no atoms")]
    NoAtoms,

    #[error("atom set is not computable: {0}")]
    AtomsUnknown(String),

    #[error("enumeration is incomplete: {0}")]
    IncompleteEnumeration(String),

    #[error("cannot certify isolation: {0}")]
    CannotCertifyIsolation(String),

    #[error("invalid monoid description: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
