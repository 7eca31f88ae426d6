use thiserror::Error;

use crate::parser::ParseError;
use crate::quat::Quaternion;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite component")]
    NonFinite,

    #[error("division by a (numerically) zero quaternion")]
    ZeroDivisor,

    #[error("intermediate value overflowed the double range")]
    Overflow,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("series did not converge after {terms} terms")]
    NotConverged { partial: Quaternion, terms: usize },

    #[error("ratio test inconclusive: relative spread {spread:.3} over the tail")]
    Inconclusive { spread: f64 },

    #[error("majorant violated at index {0}")]
    MajorantViolated(usize),

    #[error("coefficient r_{index} is not real (imaginary residue {residue:e})")]
    NonRealCoefficient { index: usize, residue: f64 },

    #[error("general term rule does not match coefficient {0}")]
    Mismatch(usize),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
