//! Rank aggregation: combine several (possibly weighted) rankings of the same
//! objects into a single consensus ranking.
//!
//! The flagship aggregator ([`merge::aggregate`]) merges the two most similar
//! rankings at a time, blending per-object position scores in proportion to
//! the rankings' weights, until one ranking survives. Alongside it the crate
//! ships the classical baselines (Borda, mean/geometric rank, iterated
//! plurality voting, the MC4 Markov chain, and the Stuart / Robust Rank
//! Aggregation order-statistic methods) plus the footrule and Kendall
//! distances used to score any of them.
//!
//! The crate is `no_std` (it allocates, but performs no I/O); file formats,
//! the CLI, and the experiment harnesses live in the companion `rankfuse`
//! crate.
//!
//! ```
//! use rankfuse_core::{Ranking, RankingList};
//! use rankfuse_core::merge::{aggregate, MergeConfig};
//!
//! let a = Ranking::new(vec![1, 2, 4, 3, 5]).unwrap();
//! let b = Ranking::new(vec![2, 1, 3, 4, 5]).unwrap();
//! let inputs = RankingList::uniform(vec![a, b]).unwrap();
//! let result = aggregate(&inputs, &MergeConfig::default()).unwrap();
//! assert_eq!(result.consensus.order(), &[1, 2, 3, 4, 5]);
//! assert_eq!(result.objective, 4.0);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod baselines;
mod error;
pub mod merge;
pub mod metrics;
pub mod ranking;
pub mod scores;
pub mod special;

pub use error::Error;
pub use ranking::{ObjectId, Ranking, RankingList, Weight, WeightedRanking};
