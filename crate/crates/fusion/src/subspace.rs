//! Feature ranking by per-feature significance against the class labels,
//! and "fair" partitioning of the ranked list into K distinct groups of
//! near-equal summed log-significance.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::types::{ClassLabel, Dataset};

/// Caps for degenerate F-statistics so logs stay finite.
const SIGNIFICANCE_FLOOR: f64 = 1e-12;
const SIGNIFICANCE_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature_index: usize,
    pub significance: f64,
    pub log_significance: f64,
}

/// Features sorted descending by significance (ties by ascending index).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRanking {
    pub scores: Vec<FeatureScore>,
}

/// K disjoint feature-index groups covering every feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspacePartition {
    pub groups: Vec<Vec<usize>>,
    pub group_scores: Vec<f64>,
}

/// Per-feature one-way ANOVA F-statistic of the feature against the two
/// class labels (the single-response reduction of a multivariate
/// significance test), floored/capped for degenerate features.
pub fn rank_features(train: &Dataset) -> Result<FeatureRanking> {
    if !train.has_both_classes() {
        return Err(FusionError::SingleClass);
    }
    let dim = train.dimension();
    let n = train.len() as f64;
    let mut scores = Vec::with_capacity(dim);
    for f in 0..dim {
        let mut sums = [0.0f64; 2];
        let mut counts = [0.0f64; 2];
        for (s, &l) in train.samples.iter().zip(&train.labels) {
            let g = if l == ClassLabel::Omega2 { 1 } else { 0 };
            sums[g] += s.features[f];
            counts[g] += 1.0;
        }
        let means = [sums[0] / counts[0], sums[1] / counts[1]];
        let grand = (sums[0] + sums[1]) / n;
        let mut ssw = 0.0;
        for (s, &l) in train.samples.iter().zip(&train.labels) {
            let g = if l == ClassLabel::Omega2 { 1 } else { 0 };
            let d = s.features[f] - means[g];
            ssw += d * d;
        }
        let ssb = counts[0] * (means[0] - grand).powi(2) + counts[1] * (means[1] - grand).powi(2);
        let msb = ssb; // G - 1 = 1
        let msw = ssw / (n - 2.0);
        let raw = if msw > 0.0 { msb / msw } else if msb > 0.0 { SIGNIFICANCE_CAP } else { 0.0 };
        let significance = raw.clamp(SIGNIFICANCE_FLOOR, SIGNIFICANCE_CAP);
        scores.push(FeatureScore {
            feature_index: f,
            significance,
            log_significance: significance.ln(),
        });
    }
    scores.sort_by(|a, b| {
        b.significance
            .partial_cmp(&a.significance)
            .unwrap()
            .then(a.feature_index.cmp(&b.feature_index))
    });
    Ok(FeatureRanking { scores })
}

/// Pairs the ranked features top-with-bottom and assigns each pair, best
/// pair first, to the group with the smallest current log-significance
/// sum. An odd leftover middle feature goes to the lightest group last.
pub fn fair_partition(ranking: &FeatureRanking, k: usize) -> Result<SubspacePartition> {
    let d = ranking.scores.len();
    if k == 0 || k > d {
        return Err(FusionError::TooManyGroups { k, dim: d });
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut group_scores = vec![0.0f64; k];

    let lightest = |scores: &[f64]| {
        scores
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap().then(a.0.cmp(&b.0)))
            .unwrap()
            .0
    };

    let mut lo = 0;
    let mut hi = d;
    while hi - lo >= 2 {
        let best = &ranking.scores[lo];
        let worst = &ranking.scores[hi - 1];
        let g = lightest(&group_scores);
        groups[g].push(best.feature_index);
        groups[g].push(worst.feature_index);
        group_scores[g] += best.log_significance + worst.log_significance;
        lo += 1;
        hi -= 1;
    }
    if lo < hi {
        let mid = &ranking.scores[lo];
        let g = lightest(&group_scores);
        groups[g].push(mid.feature_index);
        group_scores[g] += mid.log_significance;
    }
    Ok(SubspacePartition { groups, group_scores })
}
