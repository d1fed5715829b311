//! CART binary decision trees with Gini, twoing and deviance splitting.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::types::{hard_from_soft, ClassLabel, Dataset, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitCriterion {
    Gini,
    Twoing,
    Deviance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CartMode {
    Classification,
    Regression,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartParams {
    pub split_criterion: SplitCriterion,
    pub min_split: usize,
    pub mode: CartMode,
}

impl Default for CartParams {
    fn default() -> Self {
        CartParams {
            split_criterion: SplitCriterion::Gini,
            min_split: 10,
            mode: CartMode::Classification,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Node {
    Internal {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        /// (n_omega1, n_omega2) training counts in the leaf.
        counts: (usize, usize),
        /// Omega2 fraction (classification) or mean unit label (regression);
        /// identical for binary labels but kept per the configured mode.
        value: f64,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CartModel {
    pub params: CartParams,
    pub feature_indices: Vec<usize>,
    pub full_dimension: usize,
    root: Node,
}

pub fn train_cart(train: &Dataset, feature_indices: &[usize], params: CartParams) -> Result<CartModel> {
    if feature_indices.is_empty() {
        return Err(FusionError::EmptyFeatureSet);
    }
    if params.min_split < 2 {
        return Err(FusionError::OutOfRange(params.min_split as f64, "min_split >= 2"));
    }
    let full_dimension = train.dimension();
    for &f in feature_indices {
        if f >= full_dimension {
            return Err(FusionError::DimensionMismatch {
                got: f,
                expected: full_dimension,
            });
        }
    }
    let rows: Vec<Vec<f64>> = train
        .samples
        .iter()
        .map(|s| feature_indices.iter().map(|&f| s.features[f]).collect())
        .collect();
    let indices: Vec<usize> = (0..rows.len()).collect();
    let root = grow(&rows, &train.labels, &indices, &params);
    Ok(CartModel {
        params,
        feature_indices: feature_indices.to_vec(),
        full_dimension,
        root,
    })
}

fn class_counts(labels: &[ClassLabel], indices: &[usize]) -> (usize, usize) {
    let n2 = indices.iter().filter(|&&i| labels[i] == ClassLabel::Omega2).count();
    (indices.len() - n2, n2)
}

fn leaf(labels: &[ClassLabel], indices: &[usize]) -> Node {
    let counts = class_counts(labels, indices);
    let value = counts.1 as f64 / indices.len() as f64;
    Node::Leaf { counts, value }
}

fn grow(rows: &[Vec<f64>], labels: &[ClassLabel], indices: &[usize], params: &CartParams) -> Node {
    let (n1, n2) = class_counts(labels, indices);
    if indices.len() < params.min_split || n1 == 0 || n2 == 0 {
        return leaf(labels, indices);
    }
    match best_split(rows, labels, indices, params.split_criterion) {
        None => leaf(labels, indices),
        Some((feature, threshold, _)) => {
            let (left, right): (Vec<usize>, Vec<usize>) =
                indices.iter().partition(|&&i| rows[i][feature] <= threshold);
            Node::Internal {
                feature,
                threshold,
                left: Box::new(grow(rows, labels, &left, params)),
                right: Box::new(grow(rows, labels, &right, params)),
            }
        }
    }
}

fn gini(n1: f64, n2: f64) -> f64 {
    let n = n1 + n2;
    if n == 0.0 {
        return 0.0;
    }
    let p1 = n1 / n;
    let p2 = n2 / n;
    1.0 - p1 * p1 - p2 * p2
}

fn deviance(n1: f64, n2: f64) -> f64 {
    let n = n1 + n2;
    let term = |nj: f64| if nj > 0.0 { nj * (nj / n).ln() } else { 0.0 };
    -2.0 * (term(n1) + term(n2))
}

/// Criterion improvement for a candidate split with left counts (l1, l2)
/// and right counts (r1, r2). Larger is better for every criterion.
pub fn split_score(criterion: SplitCriterion, l1: f64, l2: f64, r1: f64, r2: f64) -> f64 {
    let nl = l1 + l2;
    let nr = r1 + r2;
    let n = nl + nr;
    match criterion {
        SplitCriterion::Gini => {
            let parent = gini(l1 + r1, l2 + r2);
            parent - (nl / n) * gini(l1, l2) - (nr / n) * gini(r1, r2)
        }
        SplitCriterion::Twoing => {
            let pl = nl / n;
            let pr = nr / n;
            let diff = (l1 / nl - r1 / nr).abs() + (l2 / nl - r2 / nr).abs();
            pl * pr / 4.0 * diff * diff
        }
        SplitCriterion::Deviance => {
            deviance(l1 + r1, l2 + r2) - deviance(l1, l2) - deviance(r1, r2)
        }
    }
}

/// Exhaustive scan over midpoints between consecutive distinct feature
/// values. Ties between equal-scoring splits resolve to the lowest feature
/// index, then the smallest threshold.
fn best_split(
    rows: &[Vec<f64>],
    labels: &[ClassLabel],
    indices: &[usize],
    criterion: SplitCriterion,
) -> Option<(usize, f64, f64)> {
    let dim = rows[indices[0]].len();
    let mut best: Option<(usize, f64, f64)> = None;
    for feature in 0..dim {
        let mut vals: Vec<(f64, ClassLabel)> =
            indices.iter().map(|&i| (rows[i][feature], labels[i])).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let total2 = vals.iter().filter(|(_, l)| *l == ClassLabel::Omega2).count() as f64;
        let total1 = vals.len() as f64 - total2;
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        for w in 0..vals.len() - 1 {
            match vals[w].1 {
                ClassLabel::Omega1 => l1 += 1.0,
                ClassLabel::Omega2 => l2 += 1.0,
            }
            if vals[w].0 == vals[w + 1].0 {
                continue;
            }
            let threshold = 0.5 * (vals[w].0 + vals[w + 1].0);
            let score = split_score(criterion, l1, l2, total1 - l1, total2 - l2);
            if score <= 1e-12 {
                continue;
            }
            let better = match best {
                None => true,
                Some((_, _, bs)) => score > bs,
            };
            if better {
                best = Some((feature, threshold, score));
            }
        }
    }
    best
}

impl CartModel {
    /// Routes the sample to a leaf (`value <= threshold` goes left) and
    /// returns (soft, hard).
    pub fn predict(&self, sample: &Sample) -> Result<(f64, ClassLabel)> {
        if sample.dimension() != self.full_dimension {
            return Err(FusionError::DimensionMismatch {
                got: sample.dimension(),
                expected: self.full_dimension,
            });
        }
        let projected: Vec<f64> = self.feature_indices.iter().map(|&f| sample.features[f]).collect();
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { value, .. } => {
                    let soft = value.clamp(0.0, 1.0);
                    return Ok((soft, hard_from_soft(soft)?));
                }
                Node::Internal {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if projected[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }
}
