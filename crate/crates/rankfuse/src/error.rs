use std::path::PathBuf;

use crate::crowd::{ItemId, WorkerId};

/// Errors from the harnesses, parsers, and CLI.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("weights file has {weights} entries for {rankings} rankings")]
    LengthMismatch { rankings: usize, weights: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] rankfuse_core::Error),
    #[error("trapezoid input is not sorted by strictly increasing x")]
    UnsortedPoints,
    #[error("trapezoid needs at least two points")]
    TooFewPoints,
    #[error("worker {worker} labeled item {item} more than once")]
    DuplicateLabel { worker: WorkerId, item: ItemId },
    #[error("label {label} is outside the binary domain {{0, 1}}")]
    NonBinaryLabel { label: u64 },
    #[error("worker {worker} labeled item {item}, which the reference does not cover")]
    UnknownItem { worker: WorkerId, item: ItemId },
    #[error("no weight provided for worker {worker}")]
    MissingWeight { worker: WorkerId },
    #[error("gold item {item} has no prediction")]
    MissingPrediction { item: ItemId },
    #[error("gold labels are empty")]
    EmptyGold,
}

impl Error {
    /// Distinct process exit code per error class; documented in the README.
    pub fn exit_code(&self) -> i32 {
        use rankfuse_core::Error as Core;
        match self {
            Error::Io { .. } => 10,
            Error::Parse { .. } => 11,
            Error::LengthMismatch { .. } => 12,
            Error::Config(_) => 13,
            Error::UnsortedPoints => 14,
            Error::TooFewPoints => 15,
            Error::DuplicateLabel { .. } => 16,
            Error::NonBinaryLabel { .. } => 17,
            Error::UnknownItem { .. } => 18,
            Error::MissingWeight { .. } => 19,
            Error::MissingPrediction { .. } => 20,
            Error::EmptyGold => 21,
            Error::Core(core) => match core {
                Core::EmptyRanking => 30,
                Core::DuplicateObject(_) => 31,
                Core::UniverseMismatch => 32,
                Core::EmptyInput => 33,
                Core::InvalidWeight(_) => 34,
                Core::ZeroTotalWeight => 35,
                Core::PositionOutOfRange { .. } => 36,
                Core::NoConvergence { .. } => 37,
                Core::InvalidConfig(_) => 38,
            },
        }
    }
}
