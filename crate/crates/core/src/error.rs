use thiserror::Error;

use crate::multiindex::IndexPair;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{0} is not in the admissible index set")]
    NotInIndexSet(IndexPair),

    #[error("frame is singular: the differences s_i - s_0 are linearly dependent")]
    SingularFrame,

    #[error("inconsistent system: no polynomial of total degree <= {degree} matches the data")]
    Inconsistent { degree: u32 },

    #[error("underdetermined system: the data do not single out one polynomial of degree <= {degree}")]
    Underdetermined { degree: u32 },

    #[error("no basis polynomial found up to degree cap {cap}")]
    NoSolutionWithinCap { cap: u32 },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },

    #[error("division by a non-constant expression at position {pos}")]
    NonConstantDivision { pos: usize },

    #[error("exact evaluation unavailable: {0}")]
    ExactUnavailable(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of the mathematics (as opposed to malformed input).
    pub fn is_mathematical(&self) -> bool {
        matches!(
            self,
            Error::SingularFrame
                | Error::Inconsistent { .. }
                | Error::Underdetermined { .. }
                | Error::NoSolutionWithinCap { .. }
                | Error::NonFinite(_)
                | Error::ExactUnavailable(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
