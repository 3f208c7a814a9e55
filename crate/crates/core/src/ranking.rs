//! Ranking types: validated permutations, weighted rankings, and lists of
//! weighted rankings over a common object universe.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::Error;

/// Identifier of a ranked object. Ids are arbitrary and need not be
/// contiguous; the crowd pipeline, for example, ranks annotators whose ids
/// come straight from data files.
pub type ObjectId = u64;

/// Non-negative importance attached to a ranking.
pub type Weight = f64;

/// A total order over `m` objects: `order()[0]` is the best object and holds
/// position 1. Positions are 1-based throughout the crate.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ranking {
    order: Vec<ObjectId>,
}

impl Ranking {
    /// Validates `order` as a nonempty permutation of its own element set.
    pub fn new(order: Vec<ObjectId>) -> Result<Self, Error> {
        if order.is_empty() {
            return Err(Error::EmptyRanking);
        }
        let mut seen = order.clone();
        seen.sort_unstable();
        for pair in seen.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateObject(pair[0]));
            }
        }
        Ok(Ranking { order })
    }

    /// Number of objects `m`.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Always false: empty rankings cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Objects in rank order, best first.
    pub fn order(&self) -> &[ObjectId] {
        &self.order
    }

    pub fn into_order(self) -> Vec<ObjectId> {
        self.order
    }

    /// 1-based position of every object: `positions()[order()[k-1]] == k`.
    pub fn positions(&self) -> BTreeMap<ObjectId, usize> {
        self.order
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i + 1))
            .collect()
    }

    /// 1-based position of `id`, if present.
    pub fn position_of(&self, id: ObjectId) -> Option<usize> {
        self.order.iter().position(|&o| o == id).map(|i| i + 1)
    }

    /// The object universe in ascending id order.
    pub fn sorted_ids(&self) -> Vec<ObjectId> {
        let mut ids = self.order.clone();
        ids.sort_unstable();
        ids
    }

    /// Position table over a sorted universe: entry `i` is the 1-based
    /// position of `universe[i]` in this ranking. Errors when the universes
    /// differ.
    pub(crate) fn dense_positions(&self, universe: &[ObjectId]) -> Result<Vec<usize>, Error> {
        if self.order.len() != universe.len() {
            return Err(Error::UniverseMismatch);
        }
        let mut table = alloc::vec![0usize; universe.len()];
        for (i, &id) in self.order.iter().enumerate() {
            let slot = universe
                .binary_search(&id)
                .map_err(|_| Error::UniverseMismatch)?;
            table[slot] = i + 1;
        }
        Ok(table)
    }
}

/// A [`Ranking`] paired with a non-negative weight. A zero weight is
/// permitted; aggregators treat such rankings as carrying no vote of their
/// own.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRanking {
    ranking: Ranking,
    weight: Weight,
}

impl WeightedRanking {
    /// Rejects negative or non-finite weights.
    pub fn new(ranking: Ranking, weight: Weight) -> Result<Self, Error> {
        if !weight.is_finite() || weight < 0.0 {
            return Err(Error::InvalidWeight(weight));
        }
        Ok(WeightedRanking { ranking, weight })
    }

    pub fn ranking(&self) -> &Ranking {
        &self.ranking
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }
}

/// A nonempty list of weighted rankings, all over the same object universe,
/// with positive total weight. These invariants are checked once here so the
/// aggregation routines can rely on them.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingList {
    items: Vec<WeightedRanking>,
    universe: Vec<ObjectId>,
}

impl RankingList {
    pub fn new(items: Vec<WeightedRanking>) -> Result<Self, Error> {
        let first = items.first().ok_or(Error::EmptyInput)?;
        let universe = first.ranking().sorted_ids();
        for item in &items[1..] {
            if item.ranking().sorted_ids() != universe {
                return Err(Error::UniverseMismatch);
            }
        }
        if !items.iter().any(|it| it.weight() > 0.0) {
            return Err(Error::ZeroTotalWeight);
        }
        Ok(RankingList { items, universe })
    }

    /// Wraps plain rankings with uniform weight 1.0.
    pub fn uniform(rankings: Vec<Ranking>) -> Result<Self, Error> {
        let items = rankings
            .into_iter()
            .map(|r| WeightedRanking::new(r, 1.0))
            .collect::<Result<Vec<_>, _>>()?;
        RankingList::new(items)
    }

    /// Number of rankings `n`.
    pub fn len(&self) -> usize {
        self.items.len()
    }

    /// Always false: empty lists cannot be constructed.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn items(&self) -> &[WeightedRanking] {
        &self.items
    }

    /// Number of objects `m`.
    pub fn universe_size(&self) -> usize {
        self.universe.len()
    }

    /// The shared object universe in ascending id order.
    pub fn universe(&self) -> &[ObjectId] {
        &self.universe
    }

    /// Sum of all weights, computed order-canonically so permuted lists
    /// agree bit for bit.
    pub fn total_weight(&self) -> f64 {
        let mut weights: Vec<f64> = self.items.iter().map(|it| it.weight()).collect();
        crate::metrics::stable_sum(&mut weights)
    }

    /// True when every weight equals the first one.
    pub fn has_uniform_weights(&self) -> bool {
        let w0 = self.items[0].weight();
        self.items.iter().all(|it| it.weight() == w0)
    }

    /// Same rankings with every weight replaced by 1.0.
    pub fn with_uniform_weights(&self) -> RankingList {
        let items = self
            .items
            .iter()
            .map(|it| WeightedRanking {
                ranking: it.ranking().clone(),
                weight: 1.0,
            })
            .collect();
        RankingList {
            items,
            universe: self.universe.clone(),
        }
    }

    /// Dense position table (see [`Ranking::dense_positions`]) for every item.
    pub(crate) fn dense_position_tables(&self) -> Vec<Vec<usize>> {
        self.items
            .iter()
            .map(|it| {
                it.ranking()
                    .dense_positions(&self.universe)
                    .expect("items share the universe by construction")
            })
            .collect()
    }
}
