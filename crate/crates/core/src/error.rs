use thiserror::Error;

use crate::rootdata::Weight;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorKind {
    /// Bad input: invalid type, non-dominant weight, prime out of range.
    Domain,
    /// A configured cap was hit, an integer overflowed, or I/O failed.
    Resource,
    /// An internal identity or positivity assertion failed.
    Consistency,
}

impl ErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Domain => "domain",
            ErrorKind::Resource => "resource",
            ErrorKind::Consistency => "consistency",
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid Cartan type {family}{rank}")]
    InvalidCartanType { family: char, rank: usize },

    #[error("cannot parse Cartan type {0:?}")]
    UnknownCartanType(String),

    #[error("weight {weight} has {got} coordinates, expected {expected}")]
    RankMismatch { weight: Weight, expected: usize, got: usize },

    #[error("weight {0} is not dominant")]
    NonDominant(Weight),

    #[error("weight {0} is not restricted for p = {1}")]
    NotRestricted(Weight, u32),

    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("p = {p} is too small: {what} requires p >= {required}")]
    PrimeTooSmall { p: u32, required: u32, what: &'static str },

    #[error("index {index} out of range (have {len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("characters over different root systems ({left} vs {right})")]
    RootSystemMismatch { left: String, right: String },

    #[error("{what} exceeded the cap of {cap} elements")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("decomposition stuck: residual {residual} has no admissible maximal weight")]
    Decomposition { residual: String },

    #[error("negative multiplicity {multiplicity} at weight {weight} while computing {context} of {lambda}")]
    NegativeMultiplicity {
        context: &'static str,
        lambda: Weight,
        weight: Weight,
        multiplicity: i64,
    },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("invalid cache document: {0}")]
    Cache(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidCartanType { .. }
            | Error::UnknownCartanType(_)
            | Error::RankMismatch { .. }
            | Error::NonDominant(_)
            | Error::NotRestricted(..)
            | Error::NotPrime(_)
            | Error::PrimeTooSmall { .. }
            | Error::IndexOutOfRange { .. }
            | Error::RootSystemMismatch { .. } => ErrorKind::Domain,
            Error::CapExceeded { .. } | Error::Overflow(_) | Error::Cache(_) => ErrorKind::Resource,
            Error::Decomposition { .. }
            | Error::NegativeMultiplicity { .. }
            | Error::Consistency(_) => ErrorKind::Consistency,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
