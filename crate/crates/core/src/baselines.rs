//! Classical rank-aggregation baselines, reconstructed from their standard
//! literature definitions: Borda count, weighted mean and geometric mean
//! ranks, iterated plurality voting, the MC4 Markov chain of Dwork et al.
//! (WWW 2001), and the order-statistic methods of Stuart et al. (Science
//! 2003) and Kolde et al.'s Robust Rank Aggregation (Bioinformatics 2012).
//!
//! Empty inputs are impossible here: [`RankingList`] guarantees at least one
//! ranking, so most baselines are infallible.

use alloc::vec::Vec;

use crate::ranking::{Ranking, RankingList};
use crate::scores::ScoreVector;
use crate::special::regularized_incomplete_beta;
use crate::Error;

/// The available baseline aggregators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaselineKind {
    Borda,
    MeanRank,
    GeometricRank,
    SimpleVoting,
    Mc4,
    Stuart,
    RobustRa,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 7] = [
        BaselineKind::Borda,
        BaselineKind::MeanRank,
        BaselineKind::GeometricRank,
        BaselineKind::SimpleVoting,
        BaselineKind::Mc4,
        BaselineKind::Stuart,
        BaselineKind::RobustRa,
    ];
}

/// Settings for the damped MC4 chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mc4Config {
    /// Damping factor in `(0, 1]`; values below 1 guarantee ergodicity.
    pub damping: f64,
    pub max_iters: usize,
    pub tolerance: f64,
}

impl Default for Mc4Config {
    fn default() -> Self {
        Mc4Config {
            damping: 0.85,
            max_iters: 10_000,
            tolerance: 1e-10,
        }
    }
}

impl Mc4Config {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidConfig("damping must lie in (0, 1]"));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be positive"));
        }
        if self.tolerance <= 0.0 || self.tolerance.is_nan() {
            return Err(Error::InvalidConfig("tolerance must be positive"));
        }
        Ok(())
    }
}

/// Runs the requested baseline with its default configuration.
pub fn run_baseline(kind: BaselineKind, inputs: &RankingList) -> Result<Ranking, Error> {
    match kind {
        BaselineKind::Borda => Ok(borda(inputs)),
        BaselineKind::MeanRank => Ok(mean_rank(inputs)),
        BaselineKind::GeometricRank => Ok(geometric_rank(inputs)),
        BaselineKind::SimpleVoting => Ok(simple_voting(inputs)),
        BaselineKind::Mc4 => mc4(inputs, &Mc4Config::default()),
        BaselineKind::Stuart => Ok(order_statistic_rank(inputs, OrderStatKind::Stuart)),
        BaselineKind::RobustRa => Ok(order_statistic_rank(inputs, OrderStatKind::RobustRa)),
    }
}

/// Borda count: each object scores `sum_i w_i * (m - pos_i)`; rank by
/// descending score, ties by ascending object id.
pub fn borda(inputs: &RankingList) -> Ranking {
    let m = inputs.universe_size();
    let tables = inputs.dense_position_tables();
    let mut scores = alloc::vec![0.0f64; m];
    for (item, table) in inputs.items().iter().zip(&tables) {
        for (slot, &pos) in table.iter().enumerate() {
            scores[slot] += item.weight() * (m - pos) as f64;
        }
    }
    ScoreVector::from_parts(inputs.universe().to_vec(), scores).ranking_descending()
}

/// Rank by ascending weighted arithmetic mean of positions.
pub fn mean_rank(inputs: &RankingList) -> Ranking {
    rank_by_position_key(inputs, |acc, total| acc / total, |pos| pos)
}

/// Rank by ascending weighted geometric mean of positions,
/// `exp(sum_i w_i ln pos_i / sum_i w_i)`.
pub fn geometric_rank(inputs: &RankingList) -> Ranking {
    rank_by_position_key(inputs, |acc, total| libm::exp(acc / total), libm::log)
}

fn rank_by_position_key(
    inputs: &RankingList,
    finish: impl Fn(f64, f64) -> f64,
    transform: impl Fn(f64) -> f64,
) -> Ranking {
    let m = inputs.universe_size();
    let total = inputs.total_weight();
    let tables = inputs.dense_position_tables();
    let mut keys = alloc::vec![0.0f64; m];
    for (item, table) in inputs.items().iter().zip(&tables) {
        for (slot, &pos) in table.iter().enumerate() {
            keys[slot] += item.weight() * transform(pos as f64);
        }
    }
    for key in &mut keys {
        *key = finish(*key, total);
    }
    ScoreVector::from_parts(inputs.universe().to_vec(), keys).ranking_ascending()
}

/// Iterated plurality: in each round every ranking votes (with its weight)
/// for its best not-yet-placed object; the object with the largest vote takes
/// the next consensus position, ties by ascending object id.
pub fn simple_voting(inputs: &RankingList) -> Ranking {
    let m = inputs.universe_size();
    let universe = inputs.universe();
    // Per-ranking order expressed as universe slots, plus a cursor that skips
    // already placed objects.
    let orders: Vec<Vec<usize>> = inputs
        .items()
        .iter()
        .map(|it| {
            it.ranking()
                .order()
                .iter()
                .map(|id| universe.binary_search(id).expect("shared universe"))
                .collect()
        })
        .collect();
    let mut cursors = alloc::vec![0usize; inputs.len()];
    let mut placed = alloc::vec![false; m];
    let mut consensus = Vec::with_capacity(m);

    for _ in 0..m {
        let mut votes = alloc::vec![0.0f64; m];
        for ((order, cursor), item) in orders.iter().zip(&mut cursors).zip(inputs.items()) {
            while placed[order[*cursor]] {
                *cursor += 1;
            }
            votes[order[*cursor]] += item.weight();
        }
        // max_by keeps the later of equal elements, so scan from the highest
        // slot down to land ties on the smallest id.
        let winner = (0..m)
            .rev()
            .filter(|&slot| !placed[slot])
            .max_by(|&a, &b| votes[a].partial_cmp(&votes[b]).expect("finite votes"))
            .expect("an unplaced object remains");
        placed[winner] = true;
        consensus.push(universe[winner]);
    }
    Ranking::new(consensus).expect("permutation of the universe")
}

/// MC4: from object `u` the chain picks `v` uniformly among all `m` objects
/// and moves there iff a strict weighted majority of the rankings places `v`
/// above `u`; the chain is damped toward uniform and objects are ranked by
/// descending stationary mass (ties by ascending id).
///
/// An exact 50/50 weight split is not a majority: the chain stays.
pub fn mc4(inputs: &RankingList, cfg: &Mc4Config) -> Result<Ranking, Error> {
    Ok(mc4_stationary(inputs, cfg)?.ranking_descending())
}

/// Stationary distribution of the damped MC4 chain, found by power
/// iteration.
pub fn mc4_stationary(inputs: &RankingList, cfg: &Mc4Config) -> Result<ScoreVector, Error> {
    cfg.validate()?;
    let m = inputs.universe_size();
    if m == 1 {
        return Ok(ScoreVector::from_parts(
            inputs.universe().to_vec(),
            alloc::vec![1.0],
        ));
    }
    let tables = inputs.dense_position_tables();
    let total_weight = inputs.total_weight();

    // prefer[u][v] = total weight of rankings placing v above u.
    let mut prefer = alloc::vec![0.0f64; m * m];
    for (item, table) in inputs.items().iter().zip(&tables) {
        for u in 0..m {
            for v in 0..m {
                if table[v] < table[u] {
                    prefer[u * m + v] += item.weight();
                }
            }
        }
    }

    let uniform_jump = (1.0 - cfg.damping) / m as f64;
    let step = cfg.damping / m as f64;
    // Row-stochastic damped transition matrix.
    let mut transition = alloc::vec![0.0f64; m * m];
    for u in 0..m {
        let mut stay = 1.0;
        for v in 0..m {
            if v != u && prefer[u * m + v] > total_weight / 2.0 {
                transition[u * m + v] = step;
                stay -= 1.0 / m as f64;
            }
        }
        transition[u * m + u] = cfg.damping * stay;
        for v in 0..m {
            transition[u * m + v] += uniform_jump;
        }
    }

    // Power iteration from the uniform distribution.
    let mut mass = alloc::vec![1.0 / m as f64; m];
    let mut next = alloc::vec![0.0f64; m];
    let mut converged = false;
    let mut iters = 0;
    while iters < cfg.max_iters {
        iters += 1;
        next.iter_mut().for_each(|x| *x = 0.0);
        for u in 0..m {
            let xu = mass[u];
            for v in 0..m {
                next[v] += xu * transition[u * m + v];
            }
        }
        let diff: f64 = mass
            .iter()
            .zip(&next)
            .map(|(&a, &b)| libm::fabs(a - b))
            .sum();
        core::mem::swap(&mut mass, &mut next);
        if diff < cfg.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { iters });
    }
    Ok(ScoreVector::from_parts(inputs.universe().to_vec(), mass))
}

/// Which order-statistic score to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStatKind {
    /// Stuart/Aerts score: `n! * V_n` over the ascending normalized ranks.
    Stuart,
    /// Robust Rank Aggregation: Bonferroni-adjusted minimum of
    /// `BetaCDF(r_(k); k, n-k+1)`.
    RobustRa,
}

/// Per-object order-statistic scores over normalized ranks `pos/m`. Smaller
/// is better.
///
/// Robust Rank Aggregation scores are Bonferroni-adjusted (multiplied by `n`
/// and capped at 1); the cap can tie the least significant objects, so
/// [`order_statistic_rank`] orders by the raw minimum p-value instead.
///
/// Both methods are unweighted by definition; non-uniform input weights are
/// ignored with a warning.
pub fn order_statistic_scores(inputs: &RankingList, kind: OrderStatKind) -> ScoreVector {
    match kind {
        OrderStatKind::Stuart => raw_order_stat_scores(inputs, kind),
        OrderStatKind::RobustRa => {
            let raw = raw_order_stat_scores(inputs, kind);
            let n = inputs.len() as f64;
            let capped = raw.scores().iter().map(|&p| (p * n).min(1.0)).collect();
            ScoreVector::from_parts(inputs.universe().to_vec(), capped)
        }
    }
}

/// Consensus ranking by ascending order-statistic score, ties by ascending
/// object id. Unanimous inputs are recovered exactly.
pub fn order_statistic_rank(inputs: &RankingList, kind: OrderStatKind) -> Ranking {
    raw_order_stat_scores(inputs, kind).ranking_ascending()
}

/// Stuart scores, or raw (uncapped, unadjusted) minimum Beta p-values for
/// Robust Rank Aggregation.
fn raw_order_stat_scores(inputs: &RankingList, kind: OrderStatKind) -> ScoreVector {
    if !inputs.has_uniform_weights() {
        log::warn!(
            "order-statistic aggregation ignores ranking weights; non-uniform weights dropped"
        );
    }
    let m = inputs.universe_size();
    let n = inputs.len();
    let tables = inputs.dense_position_tables();

    let mut scores = alloc::vec![0.0f64; m];
    let mut ranks = alloc::vec![0.0f64; n];
    for slot in 0..m {
        for (i, table) in tables.iter().enumerate() {
            ranks[i] = table[slot] as f64 / m as f64;
        }
        ranks.sort_by(|a, b| a.partial_cmp(b).expect("finite ranks"));
        scores[slot] = match kind {
            OrderStatKind::Stuart => stuart_score(&ranks),
            OrderStatKind::RobustRa => rra_min_p(&ranks),
        };
    }
    ScoreVector::from_parts(inputs.universe().to_vec(), scores)
}

/// `min_k BetaCDF(r_(k); k, n-k+1)` on ascending ranks.
fn rra_min_p(sorted_ranks: &[f64]) -> f64 {
    let n = sorted_ranks.len();
    sorted_ranks
        .iter()
        .enumerate()
        .map(|(idx, &r)| {
            let k = (idx + 1) as f64;
            regularized_incomplete_beta(k, n as f64 - k + 1.0, r)
        })
        .fold(1.0f64, f64::min)
}

/// Stuart score `n! * V_n` with
/// `V_k = sum_{i=1..k} (-1)^(i-1) V_{k-i} r_{n-k+1}^i / i!` on ascending
/// ranks (`V_0 = 1`).
fn stuart_score(sorted_ranks: &[f64]) -> f64 {
    let n = sorted_ranks.len();
    let mut v = alloc::vec![0.0f64; n + 1];
    v[0] = 1.0;
    for k in 1..=n {
        let r = sorted_ranks[n - k];
        let mut term = 1.0f64; // r^i / i!, built incrementally
        let mut sum = 0.0f64;
        for i in 1..=k {
            term *= r / i as f64;
            let signed = if i % 2 == 1 { term } else { -term };
            sum += signed * v[k - i];
        }
        v[k] = sum;
    }
    let factorial: f64 = (1..=n).map(|i| i as f64).product();
    factorial * v[n]
}
