//! Crowdsourced-label aggregation: majority vote as the baseline, per-worker
//! quality features measured against it, one worker ranking per feature, a
//! consensus worker ranking from the weighted merge aggregator, linear
//! rank-derived worker weights, and weighted label prediction scored against
//! gold labels.

use std::collections::BTreeMap;

use rankfuse_core::merge::{aggregate, AggregationResult, MergeConfig};
use rankfuse_core::{Ranking, RankingList};

use crate::Error;

pub type WorkerId = u64;
pub type ItemId = u64;
/// Binary category: 0 or 1 (1 is the positive class).
pub type Label = u8;

/// Sparse worker × item label assignments. At most one label per
/// `(worker, item)` pair; the label domain is binary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMatrix {
    by_item: BTreeMap<ItemId, Vec<(WorkerId, Label)>>,
    by_worker: BTreeMap<WorkerId, Vec<(ItemId, Label)>>,
    n_labels: usize,
}

impl LabelMatrix {
    pub fn from_records(
        records: impl IntoIterator<Item = (WorkerId, ItemId, Label)>,
    ) -> Result<Self, Error> {
        let mut by_item: BTreeMap<ItemId, Vec<(WorkerId, Label)>> = BTreeMap::new();
        let mut by_worker: BTreeMap<WorkerId, Vec<(ItemId, Label)>> = BTreeMap::new();
        let mut seen = std::collections::HashSet::new();
        let mut n_labels = 0;
        for (worker, item, label) in records {
            if label > 1 {
                return Err(Error::NonBinaryLabel {
                    label: label as u64,
                });
            }
            if !seen.insert((worker, item)) {
                return Err(Error::DuplicateLabel { worker, item });
            }
            by_item.entry(item).or_default().push((worker, label));
            by_worker.entry(worker).or_default().push((item, label));
            n_labels += 1;
        }
        Ok(LabelMatrix {
            by_item,
            by_worker,
            n_labels,
        })
    }

    pub fn n_workers(&self) -> usize {
        self.by_worker.len()
    }

    pub fn n_items(&self) -> usize {
        self.by_item.len()
    }

    pub fn n_labels(&self) -> usize {
        self.n_labels
    }

    pub fn workers(&self) -> impl Iterator<Item = WorkerId> + '_ {
        self.by_worker.keys().copied()
    }

    /// `(worker, label)` pairs for one item.
    pub fn item_labels(&self, item: ItemId) -> &[(WorkerId, Label)] {
        self.by_item.get(&item).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.by_item.keys().copied()
    }
}

/// Ground-truth item labels; only items present here count toward accuracy.
pub type GoldLabels = BTreeMap<ItemId, Label>;

/// The quality features computed per worker. `None` marks an undefined value
/// (zero denominator), substituted by
/// [`PipelineConfig::undefined_feature_value`] when ranking.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FeatureSet {
    pub accuracy: Option<f64>,
    pub specificity: Option<f64>,
    pub sensitivity: Option<f64>,
    pub precision: Option<f64>,
}

impl FeatureSet {
    pub fn get(&self, feature: Feature) -> Option<f64> {
        match feature {
            Feature::Accuracy => self.accuracy,
            Feature::Specificity => self.specificity,
            Feature::Sensitivity => self.sensitivity,
            Feature::Precision => self.precision,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    Accuracy,
    Specificity,
    Sensitivity,
    Precision,
}

impl Feature {
    pub fn token(&self) -> &'static str {
        match self {
            Feature::Accuracy => "accuracy",
            Feature::Specificity => "specificity",
            Feature::Sensitivity => "sensitivity",
            Feature::Precision => "precision",
        }
    }
}

/// Per-worker feature sets.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnnotatorFeatures(pub BTreeMap<WorkerId, FeatureSet>);

/// Pipeline settings.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    /// Features to rank workers by, in order; repeats are allowed (the
    /// literal mode uses sensitivity twice under its historical "recall"
    /// alias).
    pub features: Vec<Feature>,
    /// Label assigned on exact vote ties.
    pub tie_label: Label,
    pub merge: MergeConfig,
    /// Stand-in value when a feature's denominator is zero.
    pub undefined_feature_value: f64,
    /// Skip rank-derived weights and give every worker weight 1.0 (the
    /// prediction then reduces to majority voting).
    pub uniform_weights: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            features: vec![
                Feature::Accuracy,
                Feature::Specificity,
                Feature::Sensitivity,
                Feature::Precision,
            ],
            tie_label: 1,
            merge: MergeConfig::default(),
            undefined_feature_value: 0.0,
            uniform_weights: false,
        }
    }
}

impl PipelineConfig {
    /// The feature list as literally described alongside the default set:
    /// accuracy, specificity, sensitivity, and recall — the last two being
    /// the same metric, counted twice.
    pub fn literal_features() -> Vec<Feature> {
        vec![
            Feature::Accuracy,
            Feature::Specificity,
            Feature::Sensitivity,
            Feature::Sensitivity,
        ]
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.features.is_empty() {
            return Err(Error::Config("at least one feature is required".into()));
        }
        if self.tie_label > 1 {
            return Err(Error::Config("tie_label must be 0 or 1".into()));
        }
        if !self.undefined_feature_value.is_finite() {
            return Err(Error::Config("undefined_feature_value must be finite".into()));
        }
        self.merge.validate()?;
        Ok(())
    }
}

/// Per-item plurality label; exact ties resolve to `tie_label`.
pub fn majority_vote(labels: &LabelMatrix, tie_label: Label) -> BTreeMap<ItemId, Label> {
    labels
        .items()
        .map(|item| {
            let mut counts = [0usize; 2];
            for &(_, label) in labels.item_labels(item) {
                counts[label as usize] += 1;
            }
            let winner = match counts[1].cmp(&counts[0]) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Equal => tie_label,
            };
            (item, winner)
        })
        .collect()
}

/// Confusion-matrix features per worker against `reference` labels
/// (positive class = 1). A zero denominator leaves that feature undefined.
pub fn annotator_features(
    labels: &LabelMatrix,
    reference: &BTreeMap<ItemId, Label>,
) -> Result<AnnotatorFeatures, Error> {
    let mut out = BTreeMap::new();
    for (&worker, worked) in &labels.by_worker {
        let (mut tp, mut tn, mut fp, mut fneg) = (0u64, 0u64, 0u64, 0u64);
        for &(item, label) in worked {
            let truth = *reference
                .get(&item)
                .ok_or(Error::UnknownItem { worker, item })?;
            match (label, truth) {
                (1, 1) => tp += 1,
                (0, 0) => tn += 1,
                (1, 0) => fp += 1,
                (0, 1) => fneg += 1,
                _ => unreachable!("labels are validated binary"),
            }
        }
        let ratio = |num: u64, den: u64| (den > 0).then(|| num as f64 / den as f64);
        out.insert(
            worker,
            FeatureSet {
                accuracy: ratio(tp + tn, tp + tn + fp + fneg),
                specificity: ratio(tn, tn + fp),
                sensitivity: ratio(tp, tp + fneg),
                precision: ratio(tp, tp + fp),
            },
        );
    }
    Ok(AnnotatorFeatures(out))
}

/// One worker ranking per selected feature (descending feature value, ties
/// by ascending worker id), each with uniform weight 1.0. Undefined feature
/// values rank as `undefined_value`.
pub fn feature_rankings(
    features: &AnnotatorFeatures,
    selected: &[Feature],
    undefined_value: f64,
) -> Result<RankingList, Error> {
    let rankings = selected
        .iter()
        .map(|&feature| {
            let mut keyed: Vec<(f64, WorkerId)> = features
                .0
                .iter()
                .map(|(&worker, set)| (set.get(feature).unwrap_or(undefined_value), worker))
                .collect();
            // Stable sort: descending value, worker ids already ascending.
            keyed.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite feature values"));
            Ranking::new(keyed.into_iter().map(|(_, w)| w).collect())
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(RankingList::uniform(rankings)?)
}

/// Linear rank-to-weight map: position `k` of `m` gets `(m - k + 1) / m`,
/// so the top worker weighs 1.0 and the bottom `1/m`.
pub fn rank_to_weight(consensus: &Ranking) -> BTreeMap<WorkerId, f64> {
    let m = consensus.len() as f64;
    consensus
        .order()
        .iter()
        .enumerate()
        .map(|(i, &worker)| (worker, (m - (i + 1) as f64 + 1.0) / m))
        .collect()
}

/// Per-item label with the largest total worker weight; exact ties resolve
/// to `tie_label`. With all-equal weights this reduces to majority voting.
pub fn weighted_label_aggregate(
    labels: &LabelMatrix,
    weights: &BTreeMap<WorkerId, f64>,
    tie_label: Label,
) -> Result<BTreeMap<ItemId, Label>, Error> {
    labels
        .items()
        .map(|item| {
            let mut mass = [0.0f64; 2];
            for &(worker, label) in labels.item_labels(item) {
                let w = weights
                    .get(&worker)
                    .ok_or(Error::MissingWeight { worker })?;
                mass[label as usize] += w;
            }
            let winner = if mass[1] > mass[0] {
                1
            } else if mass[1] < mass[0] {
                0
            } else {
                tie_label
            };
            Ok((item, winner))
        })
        .collect()
}

/// Fraction of gold items predicted correctly.
pub fn evaluate_accuracy(
    predicted: &BTreeMap<ItemId, Label>,
    gold: &GoldLabels,
) -> Result<f64, Error> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let mut correct = 0usize;
    for (&item, &truth) in gold {
        let p = predicted
            .get(&item)
            .ok_or(Error::MissingPrediction { item })?;
        if *p == truth {
            correct += 1;
        }
    }
    Ok(correct as f64 / gold.len() as f64)
}

/// Everything the pipeline produced, including the intermediate artifacts.
#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub majority_labels: BTreeMap<ItemId, Label>,
    pub baseline_accuracy: f64,
    pub features: AnnotatorFeatures,
    /// Consensus ranking of the workers plus the merge diagnostics.
    pub consensus: AggregationResult,
    pub worker_weights: BTreeMap<WorkerId, f64>,
    pub predictions: BTreeMap<ItemId, Label>,
    pub proposed_accuracy: f64,
}

/// Chains the whole pipeline: majority vote, features against it, one
/// ranking per feature, consensus worker ranking, rank weights, weighted
/// prediction, and accuracy against gold.
pub fn run_pipeline(
    labels: &LabelMatrix,
    gold: &GoldLabels,
    cfg: &PipelineConfig,
) -> Result<PipelineReport, Error> {
    cfg.validate()?;
    let majority_labels = majority_vote(labels, cfg.tie_label);
    let baseline_accuracy = evaluate_accuracy(&majority_labels, gold)?;

    let features = annotator_features(labels, &majority_labels)?;
    let rankings = feature_rankings(&features, &cfg.features, cfg.undefined_feature_value)?;
    let consensus = aggregate(&rankings, &cfg.merge)?;

    let worker_weights = if cfg.uniform_weights {
        labels.workers().map(|w| (w, 1.0)).collect()
    } else {
        rank_to_weight(&consensus.consensus)
    };
    let predictions = weighted_label_aggregate(labels, &worker_weights, cfg.tie_label)?;
    let proposed_accuracy = evaluate_accuracy(&predictions, gold)?;

    Ok(PipelineReport {
        majority_labels,
        baseline_accuracy,
        features,
        consensus,
        worker_weights,
        predictions,
        proposed_accuracy,
    })
}
