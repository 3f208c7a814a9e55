use core::fmt;

use crate::ranking::ObjectId;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A ranking was built from an empty sequence.
    EmptyRanking,
    /// An object id appears more than once in a ranking.
    DuplicateObject(ObjectId),
    /// Two rankings (or a ranking and a list) cover different object sets.
    UniverseMismatch,
    /// An operation that needs at least one ranking received none.
    EmptyInput,
    /// A weight is negative or not finite.
    InvalidWeight(f64),
    /// Every weight in a context that needs positive total weight is zero.
    ZeroTotalWeight,
    /// A 1-based position lies outside `1..=m`.
    PositionOutOfRange { m: usize, k: usize },
    /// Power iteration did not converge within the configured budget.
    NoConvergence { iters: usize },
    /// A configuration field violates its documented range.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyRanking => write!(f, "ranking must contain at least one object"),
            Error::DuplicateObject(id) => write!(f, "object {id} appears more than once"),
            Error::UniverseMismatch => write!(f, "rankings cover different object sets"),
            Error::EmptyInput => write!(f, "at least one ranking is required"),
            Error::InvalidWeight(w) => write!(f, "weight {w} is negative or not finite"),
            Error::ZeroTotalWeight => write!(f, "total weight must be positive"),
            Error::PositionOutOfRange { m, k } => {
                write!(f, "position {k} is outside 1..={m}")
            }
            Error::NoConvergence { iters } => {
                write!(f, "no convergence after {iters} iterations")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid config: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
