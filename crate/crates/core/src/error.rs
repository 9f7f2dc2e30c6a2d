//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring description: {0}")]
    InvalidRing(String),

    #[error("elements belong to different rings")]
    RingMismatch,

    #[error("leading coefficient of the divisor is not a unit")]
    NonUnitLeadingCoefficient,

    #[error("leading coefficient matrix of the divisor is singular")]
    SingularLeadingMatrix,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("not a Drinfeld module: {0}")]
    NotDrinfeld(String),

    #[error("operation requires a field base ring")]
    UnsupportedBase,

    #[error("morphism is not an isogeny")]
    NotAnIsogeny,

    #[error("unsupported module shape: {0}")]
    UnsupportedShape(String),

    #[error("motive is not in the essential image of the module functor: {0}")]
    NotAbelian(String),

    #[error("motive is not effective: {0}")]
    NotEffective(String),

    #[error("malformed group scheme presentation: {0}")]
    MalformedPresentation(String),

    #[error("shtuka is not etale")]
    NotEtale,

    #[error("ideals are not coprime")]
    NotCoprime,

    #[error("base field is not contained in the fixed field of the requested Frobenius power")]
    BaseTooLarge,

    #[error("residue field of the prime is not contained in the base field")]
    ResidueFieldTooSmall,

    #[error("z-adic precision too low: {0}")]
    PrecisionTooLow(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
