//! Experiment harnesses, file formats, and the command-line surface for the
//! `rankfuse-core` rank-aggregation library.
//!
//! - [`bench`]: the synthetic Gaussian-noise benchmark — perturb a ground
//!   truth at increasing noise, aggregate with every algorithm, record the
//!   similarity curve, and summarize it with a trapezoidal AUC.
//! - [`crowd`]: the crowdsourced-label pipeline — majority vote, per-worker
//!   quality features, consensus ranking of workers, and rank-weighted label
//!   prediction.
//! - [`formats`]: plain-text file formats (rankings, weights, label
//!   matrices) and the CSV/report emitters.
//! - [`cli`]: the `rankfuse` binary's argument surface and command runner.

pub mod bench;
pub mod cli;
pub mod crowd;
mod error;
pub mod formats;
pub mod stats;

pub use error::Error;
