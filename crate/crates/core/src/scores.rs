//! Position-based gain, penalty, and overall scores, plus the
//! weight-proportional merge of two score vectors.
//!
//! An object at 1-based position `k` in a ranking of `m` objects earns a gain
//! `(m-k)(m-k-1)/2` for the objects it precedes and a penalty `k(k+1)/2` for
//! lagging. The overall score is their difference, `(m^2 - 2mk - m)/2`, which
//! is strictly decreasing in `k`, so sorting objects by descending overall
//! score reproduces the ranking.

use alloc::vec::Vec;

use crate::ranking::{ObjectId, Ranking, Weight};
use crate::Error;

/// Gain score `(m-k)(m-k-1)/2` for position `k` of `m`. Exact integer; the
/// product of two consecutive integers is always even.
pub fn gain_score(m: usize, k: usize) -> Result<i64, Error> {
    check_position(m, k)?;
    let (m, k) = (m as i64, k as i64);
    Ok((m - k) * (m - k - 1) / 2)
}

/// Penalty score `k(k+1)/2` for position `k` of `m`.
pub fn penalty_score(m: usize, k: usize) -> Result<i64, Error> {
    check_position(m, k)?;
    let k = k as i64;
    Ok(k * (k + 1) / 2)
}

/// Overall score: gain minus penalty, equal to `(m^2 - 2mk - m)/2`. Returned
/// as a float so it can flow into weighted merges without rounding; the value
/// itself is an exact integer.
pub fn overall_score(m: usize, k: usize) -> Result<f64, Error> {
    check_position(m, k)?;
    Ok(overall_i64(m as i64, k as i64) as f64)
}

fn check_position(m: usize, k: usize) -> Result<(), Error> {
    if m == 0 || k == 0 || k > m {
        return Err(Error::PositionOutOfRange { m, k });
    }
    Ok(())
}

fn overall_i64(m: i64, k: i64) -> i64 {
    (m - k) * (m - k - 1) / 2 - k * (k + 1) / 2
}

/// Per-object scores over a ranking's universe (ids kept in ascending
/// order).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    ids: Vec<ObjectId>,
    scores: Vec<f64>,
}

impl ScoreVector {
    pub(crate) fn from_parts(ids: Vec<ObjectId>, scores: Vec<f64>) -> Self {
        debug_assert_eq!(ids.len(), scores.len());
        ScoreVector { ids, scores }
    }

    /// Number of objects `m`.
    pub fn universe_size(&self) -> usize {
        self.ids.len()
    }

    /// Object ids in ascending order.
    pub fn ids(&self) -> &[ObjectId] {
        &self.ids
    }

    pub fn get(&self, id: ObjectId) -> Option<f64> {
        self.ids.binary_search(&id).ok().map(|i| self.scores[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (ObjectId, f64)> + '_ {
        self.ids.iter().copied().zip(self.scores.iter().copied())
    }

    pub(crate) fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Ranking by descending score; equal scores order by ascending id.
    pub fn ranking_descending(&self) -> Ranking {
        self.ranking_by(|a, b| b.partial_cmp(&a).expect("scores are finite"))
    }

    /// Ranking by ascending score; equal scores order by ascending id.
    pub fn ranking_ascending(&self) -> Ranking {
        self.ranking_by(|a, b| a.partial_cmp(&b).expect("scores are finite"))
    }

    fn ranking_by(&self, cmp: impl Fn(f64, f64) -> core::cmp::Ordering) -> Ranking {
        let mut idx: Vec<usize> = (0..self.ids.len()).collect();
        // Stable sort: ties keep the ascending-id order of `self.ids`.
        idx.sort_by(|&i, &j| cmp(self.scores[i], self.scores[j]));
        let order = idx.into_iter().map(|i| self.ids[i]).collect();
        Ranking::new(order).expect("permutation of a valid universe")
    }
}

/// Overall score of every object given its position in `r`.
pub fn score_vector(r: &Ranking) -> ScoreVector {
    let m = r.len() as i64;
    let ids = r.sorted_ids();
    let positions = r
        .dense_positions(&ids)
        .expect("a ranking matches its own universe");
    let scores = positions
        .iter()
        .map(|&k| overall_i64(m, k as i64) as f64)
        .collect();
    ScoreVector::from_parts(ids, scores)
}

/// Weight-proportional blend of two score vectors:
/// `(w1*a + w2*b) / (w1 + w2)` per object. Each merged value is a convex
/// combination, so it lies between the two inputs.
pub fn merge_scores(
    s1: &ScoreVector,
    w1: Weight,
    s2: &ScoreVector,
    w2: Weight,
) -> Result<ScoreVector, Error> {
    for w in [w1, w2] {
        if !w.is_finite() || w < 0.0 {
            return Err(Error::InvalidWeight(w));
        }
    }
    if s1.ids != s2.ids {
        return Err(Error::UniverseMismatch);
    }
    let total = w1 + w2;
    if total <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let scores = s1
        .scores
        .iter()
        .zip(&s2.scores)
        .map(|(&a, &b)| (w1 * a + w2 * b) / total)
        .collect();
    Ok(ScoreVector::from_parts(s1.ids.clone(), scores))
}
