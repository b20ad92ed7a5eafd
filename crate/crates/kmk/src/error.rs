//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a generalized Cartan matrix: {0}")]
    NotGcm(String),
    #[error("matrix is not symmetrizable: {0}")]
    NotSymmetrizable(String),
    #[error("Levi block {0:?} is not of finite type")]
    LeviNotFiniteType(Vec<String>),
    #[error("root datum is not of finite type")]
    NotFiniteType,
    #[error("interval enumeration exceeded the element cap ({0} elements)")]
    IntervalTooLarge(usize),
    #[error("element {0} is not a reflection")]
    NotAReflection(String),
    #[error("({0}, {1}) is not a cover pair in the parabolic quotient")]
    NotACover(String, String),
    #[error("element does not lie in Z[e^(-a_1),...,e^(-a_n)]: offending exponent {0}")]
    NotInPolynomialSubring(String),
    #[error("convention self-test failed: {0}")]
    DictionaryPinFailure(String),
    #[error("structure constant failed to clear denominators at {0}")]
    NonClearingEntry(String),
    #[error("pairing residue is not a Laurent polynomial: {0}")]
    ResidueNotPolynomial(String),
    #[error("pullback expansion left a nonzero remainder at {0}")]
    NonZeroRemainder(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
