//! Synthetic noise benchmark: perturb a ground-truth ranking with Gaussian
//! noise of increasing strength, aggregate each noisy list with every
//! requested algorithm, and record how similar each consensus stays to its
//! inputs (mean normalized footrule similarity), summarized per algorithm by
//! the trapezoidal area under the similarity-vs-noise curve.
//!
//! Reproducibility contract: a `SweepResult` is a pure function of the
//! config. Every (noise level, ranking index) pair draws from its own
//! ChaCha8 stream (`seed_from_u64(seed)` + `set_stream(t << 32 | index)`),
//! and levels are reduced in index order, so results are identical for any
//! worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;

use rankfuse_core::baselines::{
    borda, geometric_rank, mc4, mean_rank, order_statistic_rank, simple_voting, Mc4Config,
    OrderStatKind,
};
use rankfuse_core::merge::{aggregate, MergeConfig};
use rankfuse_core::metrics::{weighted_mean_similarity, DistanceKind};
use rankfuse_core::{Ranking, RankingList};

use crate::Error;

/// An aggregation algorithm the benchmark can run: the weighted hierarchical
/// merge (`proposed`) or one of the classical baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Proposed,
    Borda,
    MeanRank,
    GeometricRank,
    SimpleVoting,
    Mc4,
    Stuart,
    RobustRa,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Proposed,
        Algorithm::Borda,
        Algorithm::MeanRank,
        Algorithm::GeometricRank,
        Algorithm::SimpleVoting,
        Algorithm::Mc4,
        Algorithm::Stuart,
        Algorithm::RobustRa,
    ];

    /// Stable token used on the CLI and in CSV output.
    pub fn token(&self) -> &'static str {
        match self {
            Algorithm::Proposed => "proposed",
            Algorithm::Borda => "borda",
            Algorithm::MeanRank => "mean",
            Algorithm::GeometricRank => "geometric",
            Algorithm::SimpleVoting => "voting",
            Algorithm::Mc4 => "mc4",
            Algorithm::Stuart => "stuart",
            Algorithm::RobustRa => "rra",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Algorithm::ALL
            .iter()
            .copied()
            .find(|a| a.token() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown algorithm '{s}' (expected one of: {})",
                    Algorithm::ALL.map(|a| a.token()).join(", ")
                ))
            })
    }
}

/// Runs one algorithm over a ranking list.
pub fn run_algorithm(
    algorithm: Algorithm,
    inputs: &RankingList,
    merge: &MergeConfig,
    mc4_cfg: &Mc4Config,
) -> Result<Ranking, Error> {
    Ok(match algorithm {
        Algorithm::Proposed => aggregate(inputs, merge)?.consensus,
        Algorithm::Borda => borda(inputs),
        Algorithm::MeanRank => mean_rank(inputs),
        Algorithm::GeometricRank => geometric_rank(inputs),
        Algorithm::SimpleVoting => simple_voting(inputs),
        Algorithm::Mc4 => mc4(inputs, mc4_cfg)?,
        Algorithm::Stuart => order_statistic_rank(inputs, OrderStatKind::Stuart),
        Algorithm::RobustRa => order_statistic_rank(inputs, OrderStatKind::RobustRa),
    })
}

/// Benchmark configuration. Defaults: 20 rankings of 30 objects, 50 noise
/// levels with the standard deviation stepped by 0.02, every algorithm
/// enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_rankings: usize,
    pub m_objects: usize,
    pub iterations: usize,
    pub sigma_step: f64,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub merge: MergeConfig,
    pub mc4: Mc4Config,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n_rankings: 20,
            m_objects: 30,
            iterations: 50,
            sigma_step: 0.02,
            seed: 0,
            algorithms: Algorithm::ALL.to_vec(),
            merge: MergeConfig::default(),
            mc4: Mc4Config::default(),
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.n_rankings == 0 {
            return Err(Error::Config("n_rankings must be positive".into()));
        }
        if self.m_objects == 0 {
            return Err(Error::Config("m_objects must be positive".into()));
        }
        if self.iterations < 2 {
            return Err(Error::Config(
                "iterations must be at least 2 (the AUC needs two points)".into(),
            ));
        }
        if !(self.sigma_step > 0.0 && self.sigma_step.is_finite()) {
            return Err(Error::Config("sigma_step must be positive".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::Config("at least one algorithm is required".into()));
        }
        self.merge.validate()?;
        self.mc4.validate()?;
        Ok(())
    }
}

/// One algorithm's similarity curve and its AUC.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmCurve {
    pub algorithm: Algorithm,
    /// `(sigma, mean similarity)` per noise level, sigma strictly increasing.
    pub points: Vec<(f64, f64)>,
    pub auc: f64,
}

/// Output of [`run_sweep`]: one curve per requested algorithm, in request
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub curves: Vec<AlgorithmCurve>,
}

/// Reorders `base` by per-object keys `position/m + Normal(0, sigma)`,
/// ascending; exact key ties keep the original relative order. Zero noise
/// returns the ranking unchanged.
pub fn perturb_ranking(base: &Ranking, sigma: f64, rng: &mut impl Rng) -> Ranking {
    assert!(sigma >= 0.0 && sigma.is_finite(), "sigma must be >= 0");
    if sigma == 0.0 {
        return base.clone();
    }
    let m = base.len() as f64;
    let noise = Normal::new(0.0, sigma).expect("sigma is positive and finite");
    let mut keyed: Vec<(f64, u64)> = base
        .order()
        .iter()
        .enumerate()
        .map(|(i, &id)| ((i + 1) as f64 / m + noise.sample(rng), id))
        .collect();
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite keys"));
    Ranking::new(keyed.into_iter().map(|(_, id)| id).collect())
        .expect("permutation of the base ranking")
}

/// Trapezoidal area under `points`; x must be strictly increasing.
pub fn auc_trapezoid(points: &[(f64, f64)]) -> Result<f64, Error> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    if points.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::UnsortedPoints);
    }
    Ok(points
        .windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum())
}

/// Runs the full sweep: for level `t = 1..=iterations` with
/// `sigma = t * sigma_step`, draws `n_rankings` fresh perturbations of the
/// ground truth (identity over `1..=m`), aggregates with every requested
/// algorithm under uniform weights, and records the mean normalized footrule
/// similarity between each output and that level's inputs.
///
/// Levels run in parallel; see the module docs for the determinism contract.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, Error> {
    cfg.validate()?;
    let truth =
        Ranking::new((1..=cfg.m_objects as u64).collect()).expect("nonempty identity");

    let levels: Vec<Vec<f64>> = (1..=cfg.iterations)
        .into_par_iter()
        .map(|t| run_level(cfg, &truth, t))
        .collect::<Result<_, _>>()?;

    let curves = cfg
        .algorithms
        .iter()
        .enumerate()
        .map(|(a_idx, &algorithm)| {
            let points: Vec<(f64, f64)> = levels
                .iter()
                .enumerate()
                .map(|(l_idx, sims)| ((l_idx + 1) as f64 * cfg.sigma_step, sims[a_idx]))
                .collect();
            let auc = auc_trapezoid(&points)?;
            Ok(AlgorithmCurve {
                algorithm,
                points,
                auc,
            })
        })
        .collect::<Result<_, Error>>()?;
    Ok(SweepResult { curves })
}

/// Mean similarity of every requested algorithm at one noise level.
fn run_level(cfg: &SweepConfig, truth: &Ranking, t: usize) -> Result<Vec<f64>, Error> {
    let sigma = t as f64 * cfg.sigma_step;
    let rankings: Vec<Ranking> = (0..cfg.n_rankings)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(((t as u64) << 32) | i as u64);
            perturb_ranking(truth, sigma, &mut rng)
        })
        .collect();
    let inputs = RankingList::uniform(rankings)?;
    cfg.algorithms
        .iter()
        .map(|&algorithm| {
            let output = run_algorithm(algorithm, &inputs, &cfg.merge, &cfg.mc4)?;
            Ok(weighted_mean_similarity(
                &output,
                &inputs,
                DistanceKind::SpearmanFootrule,
            )?)
        })
        .collect()
}
