//! Distances and similarities between rankings, and the weighted
//! total-distance objective that consensus candidates are scored by.

use alloc::vec::Vec;

use crate::ranking::{Ranking, RankingList};
use crate::Error;

/// Distance used to compare two rankings. Spearman's footrule is the default
/// everywhere.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    /// Sum over objects of absolute position differences.
    #[default]
    SpearmanFootrule,
    /// Number of object pairs ordered oppositely.
    KendallTau,
}

/// Largest possible distance between two rankings of `m` objects:
/// `floor(m^2 / 2)` for the footrule, `m(m-1)/2` for Kendall's tau.
pub fn max_distance(m: usize, kind: DistanceKind) -> u64 {
    let m = m as u64;
    match kind {
        DistanceKind::SpearmanFootrule => m * m / 2,
        DistanceKind::KendallTau => m * (m - 1) / 2,
    }
}

/// Spearman's footrule distance: sum over objects of `|pos_a - pos_b|`.
pub fn footrule_distance(a: &Ranking, b: &Ranking) -> Result<u64, Error> {
    let (pa, pb) = aligned_positions(a, b)?;
    Ok(footrule_dense(&pa, &pb))
}

/// Kendall's tau distance: the number of discordant object pairs.
pub fn kendall_distance(a: &Ranking, b: &Ranking) -> Result<u64, Error> {
    let (pa, pb) = aligned_positions(a, b)?;
    Ok(kendall_dense(&pa, &pb))
}

/// Distance of the requested kind.
pub fn distance(a: &Ranking, b: &Ranking, kind: DistanceKind) -> Result<u64, Error> {
    match kind {
        DistanceKind::SpearmanFootrule => footrule_distance(a, b),
        DistanceKind::KendallTau => kendall_distance(a, b),
    }
}

/// Similarity in `[0, 1]`: `1 - distance / max_distance`. Equals 1 iff the
/// rankings agree; for `m = 1` there is only one ranking and the similarity
/// is defined as 1.
pub fn normalized_similarity(a: &Ranking, b: &Ranking, kind: DistanceKind) -> Result<f64, Error> {
    let d = distance(a, b, kind)?;
    Ok(normalize(d, a.len(), kind))
}

/// Weighted total distance of `candidate` to every input:
/// `sum_i w_i * c(R_i, candidate)`. This is the objective a consensus
/// ranking minimizes.
///
/// Summation is order-canonical (see [`stable_sum`]), so permuting the input
/// list cannot move the result by an ulp.
pub fn weighted_total_distance(
    candidate: &Ranking,
    inputs: &RankingList,
    kind: DistanceKind,
) -> Result<f64, Error> {
    let pc = candidate.dense_positions(inputs.universe())?;
    let tables = inputs.dense_position_tables();
    let mut terms: Vec<f64> = inputs
        .items()
        .iter()
        .zip(&tables)
        .map(|(it, pi)| it.weight() * distance_dense(pi, &pc, kind) as f64)
        .collect();
    Ok(stable_sum(&mut terms))
}

/// Weight-averaged similarity of `candidate` to the inputs:
/// `sum_i w_i * sim(candidate, R_i) / sum_i w_i`.
pub fn weighted_mean_similarity(
    candidate: &Ranking,
    inputs: &RankingList,
    kind: DistanceKind,
) -> Result<f64, Error> {
    let total = inputs.total_weight();
    if total <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let m = inputs.universe_size();
    let pc = candidate.dense_positions(inputs.universe())?;
    let tables = inputs.dense_position_tables();
    let mut terms: Vec<f64> = inputs
        .items()
        .iter()
        .zip(&tables)
        .map(|(it, pi)| it.weight() * normalize(distance_dense(pi, &pc, kind), m, kind))
        .collect();
    Ok(stable_sum(&mut terms) / total)
}

/// Sums after sorting by total order, making the floating-point result
/// independent of the order the terms arrived in.
pub(crate) fn stable_sum(terms: &mut [f64]) -> f64 {
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum()
}

/// Symmetric pairwise similarity grid with a unit diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// Pairwise similarity matrix over the list: entry `(i, j)` is the
/// unweighted normalized similarity of rankings `i` and `j`. Weights play no
/// role between two rankings; they enter only when candidates are scored
/// against the whole list.
pub fn similarity_matrix(inputs: &RankingList, kind: DistanceKind) -> SimilarityMatrix {
    let n = inputs.len();
    let m = inputs.universe_size();
    let tables = inputs.dense_position_tables();
    let mut values = alloc::vec![1.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let s = normalize(distance_dense(&tables[i], &tables[j], kind), m, kind);
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    SimilarityMatrix { n, values }
}

pub(crate) fn normalize(d: u64, m: usize, kind: DistanceKind) -> f64 {
    if m <= 1 {
        return 1.0;
    }
    1.0 - d as f64 / max_distance(m, kind) as f64
}

fn aligned_positions(a: &Ranking, b: &Ranking) -> Result<(Vec<usize>, Vec<usize>), Error> {
    let universe = a.sorted_ids();
    let pa = a.dense_positions(&universe)?;
    let pb = b.dense_positions(&universe)?;
    Ok((pa, pb))
}

pub(crate) fn footrule_dense(pa: &[usize], pb: &[usize]) -> u64 {
    pa.iter()
        .zip(pb)
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum()
}

pub(crate) fn kendall_dense(pa: &[usize], pb: &[usize]) -> u64 {
    // Discordant pairs = inversions of b's positions read in a's rank order.
    let mut seq = alloc::vec![0usize; pa.len()];
    for (&ka, &kb) in pa.iter().zip(pb) {
        seq[ka - 1] = kb;
    }
    count_inversions(&mut seq)
}

pub(crate) fn distance_dense(pa: &[usize], pb: &[usize], kind: DistanceKind) -> u64 {
    match kind {
        DistanceKind::SpearmanFootrule => footrule_dense(pa, pb),
        DistanceKind::KendallTau => kendall_dense(pa, pb),
    }
}

/// Merge-sort inversion count; consumes the slice as scratch space.
fn count_inversions(seq: &mut [usize]) -> u64 {
    let mut scratch = seq.to_vec();
    sort_count(seq, &mut scratch)
}

fn sort_count(seq: &mut [usize], scratch: &mut [usize]) -> u64 {
    let n = seq.len();
    if n <= 1 {
        return 0;
    }
    let mid = n / 2;
    let mut inv = {
        let (left, right) = seq.split_at_mut(mid);
        let (sl, sr) = scratch.split_at_mut(mid);
        sort_count(left, sl) + sort_count(right, sr)
    };
    let (mut i, mut j) = (0, mid);
    for slot in scratch[..n].iter_mut() {
        if i < mid && (j >= n || seq[i] <= seq[j]) {
            *slot = seq[i];
            i += 1;
        } else {
            inv += (mid - i) as u64;
            *slot = seq[j];
            j += 1;
        }
    }
    seq.copy_from_slice(&scratch[..n]);
    inv
}
