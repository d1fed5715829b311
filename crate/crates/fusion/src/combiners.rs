//! The eight combination rules: static and adaptive weighted majority,
//! simple majority, maximum, simple average, LSE-weighted average, and
//! DCS-LA with and without priors.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::lae::{LaeEstimator, PriorCompetence};
use crate::types::{label_to_unit, ClassLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    WmrStatic,
    WmrAdaptive,
    SimpleMajority,
    Maximum,
    SimpleAverage,
    LseWeightedAverage,
    DcsLaNoPriors,
    DcsLaWithPriors,
}

impl RuleKind {
    pub const ALL: [RuleKind; 8] = [
        RuleKind::WmrStatic,
        RuleKind::WmrAdaptive,
        RuleKind::SimpleMajority,
        RuleKind::Maximum,
        RuleKind::SimpleAverage,
        RuleKind::LseWeightedAverage,
        RuleKind::DcsLaNoPriors,
        RuleKind::DcsLaWithPriors,
    ];

    pub fn display_name(self) -> &'static str {
        match self {
            RuleKind::WmrStatic => "WMR: logodds (static)",
            RuleKind::WmrAdaptive => "WMR: logodds (adaptive)",
            RuleKind::SimpleMajority => "STD: simple majority",
            RuleKind::Maximum => "STD: maximum",
            RuleKind::SimpleAverage => "STD: simple average",
            RuleKind::LseWeightedAverage => "STD: LSE-w/average",
            RuleKind::DcsLaNoPriors => "STD: DCS-LA (no priors)",
            RuleKind::DcsLaWithPriors => "STD: DCS-LA (w/priors)",
        }
    }
}

/// One fused decision. `decision` follows `score > threshold` on the
/// rule's normalized scale except for DCS-LA, where it is the selected
/// member's hard vote.
#[derive(Debug, Clone, PartialEq)]
pub struct FusionResult {
    pub score: f64,
    pub decision: ClassLabel,
    pub selected_member: Option<usize>,
    pub per_member_weights: Option<Vec<f64>>,
}

/// A combination rule plus its fitted parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FittedRule {
    pub kind: RuleKind,
    /// Raw log-odds weights for the static WMR.
    pub static_weights: Option<Vec<f64>>,
    /// Unnormalized LSE regression weights.
    pub lse_weights: Option<Vec<f64>>,
    pub lae_handles: Option<Vec<LaeEstimator>>,
    pub priors: Option<Vec<PriorCompetence>>,
    pub threshold: f64,
}

/// ln(p / (1-p)). Callers clamp p into the open interval first.
pub fn logodds(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(FusionError::OutOfRange(p, "(0,1) probability"));
    }
    Ok((p / (1.0 - p)).ln())
}

pub fn fit_wmr_static(priors: &[PriorCompetence]) -> Result<FittedRule> {
    let weights: Result<Vec<f64>> = priors.iter().map(|p| logodds(p.p)).collect();
    Ok(FittedRule {
        kind: RuleKind::WmrStatic,
        static_weights: Some(weights?),
        lse_weights: None,
        lae_handles: None,
        priors: Some(priors.to_vec()),
        threshold: 0.5,
    })
}

/// Per-sample adaptive WMR weights: the log-odds of each member's local
/// accuracy at its own soft output.
pub fn fit_wmr_adaptive_weights(lae_handles: &[LaeEstimator], soft_scores: &[f64]) -> Result<Vec<f64>> {
    lae_handles
        .iter()
        .zip(soft_scores)
        .map(|(h, &s)| logodds(h.local_accuracy(s)))
        .collect()
}

/// Weighted majority vote on the unit scale. Negative-weight members vote
/// inverted with weight |w|; weights are then normalized to sum 1 and the
/// threshold is 1/2. An all-zero weight vector defaults to Omega1.
pub fn combine_wmr(weights: &[f64], votes: &[ClassLabel]) -> Result<FusionResult> {
    if weights.len() != votes.len() {
        return Err(FusionError::InvalidPlan(format!(
            "{} weights for {} votes",
            weights.len(),
            votes.len()
        )));
    }
    if let Some(&bad) = weights.iter().find(|w| !w.is_finite()) {
        return Err(FusionError::OutOfRange(bad, "finite weight"));
    }
    let total: f64 = weights.iter().map(|w| w.abs()).sum();
    if total == 0.0 {
        return Ok(FusionResult {
            score: 0.5,
            decision: ClassLabel::Omega1,
            selected_member: None,
            per_member_weights: Some(vec![0.0; weights.len()]),
        });
    }
    let mut score = 0.0;
    let mut normalized = Vec::with_capacity(weights.len());
    for (&w, &vote) in weights.iter().zip(votes) {
        let effective_vote = if w < 0.0 { vote.other() } else { vote };
        let wn = w.abs() / total;
        normalized.push(wn);
        score += wn * label_to_unit(effective_vote);
    }
    Ok(FusionResult {
        score,
        decision: if score > 0.5 { ClassLabel::Omega2 } else { ClassLabel::Omega1 },
        selected_member: None,
        per_member_weights: Some(normalized),
    })
}

/// Simple majority: WMR with equal weights 1/K.
pub fn combine_simple_majority(votes: &[ClassLabel]) -> Result<FusionResult> {
    let k = votes.len();
    combine_wmr(&vec![1.0 / k as f64; k], votes)
}

/// Rank-based maximum rule over per-class supports: member i supports
/// Omega2 with soft_i and Omega1 with 1 - soft_i; the class holding the
/// single largest support wins, ties to Omega1.
pub fn combine_maximum(soft: &[f64]) -> Result<FusionResult> {
    if soft.is_empty() {
        return Err(FusionError::InsufficientData { needed: 1, got: 0 });
    }
    let support2 = soft.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let support1 = soft.iter().map(|s| 1.0 - s).fold(f64::NEG_INFINITY, f64::max);
    let decision = if support2 > support1 { ClassLabel::Omega2 } else { ClassLabel::Omega1 };
    Ok(FusionResult {
        score: support2.max(support1),
        decision,
        selected_member: None,
        per_member_weights: None,
    })
}

pub fn combine_simple_average(soft: &[f64]) -> Result<FusionResult> {
    if soft.is_empty() {
        return Err(FusionError::InsufficientData { needed: 1, got: 0 });
    }
    let score = soft.iter().sum::<f64>() / soft.len() as f64;
    Ok(FusionResult {
        score,
        decision: threshold_decide(score, 0.0, 1.0),
        selected_member: None,
        per_member_weights: None,
    })
}

/// LSE weights: argmin ||X w - y||^2 over the validation soft outputs,
/// no intercept, solved by ridge-stabilized normal equations
/// (lambda = 1e-8 * trace(X'X) / K) so collinear member columns stay
/// solvable.
pub fn fit_lse_weights(validation_soft: &[Vec<f64>], validation_labels: &[ClassLabel]) -> Result<FittedRule> {
    let n = validation_soft.len();
    if n == 0 || n != validation_labels.len() {
        return Err(FusionError::InsufficientData {
            needed: validation_labels.len().max(1),
            got: n,
        });
    }
    let k = validation_soft[0].len();
    if n < k {
        return Err(FusionError::InsufficientData { needed: k, got: n });
    }
    let mut xtx = nalgebra::DMatrix::zeros(k, k);
    let mut xty = nalgebra::DVector::zeros(k);
    for (row, &label) in validation_soft.iter().zip(validation_labels) {
        let y = label_to_unit(label);
        for i in 0..k {
            xty[i] += row[i] * y;
            for j in 0..k {
                xtx[(i, j)] += row[i] * row[j];
            }
        }
    }
    let lambda = 1e-8 * xtx.trace() / k as f64;
    for i in 0..k {
        xtx[(i, i)] += lambda;
    }
    let weights = xtx
        .lu()
        .solve(&xty)
        .ok_or_else(|| FusionError::InvalidPlan("singular LSE normal equations".into()))?;
    let w: Vec<f64> = weights.iter().copied().collect();
    let threshold = lse_threshold(&w);
    Ok(FittedRule {
        kind: RuleKind::LseWeightedAverage,
        static_weights: None,
        lse_weights: Some(w),
        lae_handles: None,
        priors: None,
        threshold,
    })
}

/// Half-range threshold for the fused LSE score: midpoint of the score's
/// attainable range on [0,1] member outputs given signed weights.
pub fn lse_threshold(weights: &[f64]) -> f64 {
    let lo: f64 = weights.iter().map(|w| w.min(0.0)).sum();
    let hi: f64 = weights.iter().map(|w| w.max(0.0)).sum();
    0.5 * (lo + hi)
}

pub fn combine_lse(weights: &[f64], soft: &[f64]) -> Result<FusionResult> {
    if weights.len() != soft.len() {
        return Err(FusionError::InvalidPlan(format!(
            "{} weights for {} scores",
            weights.len(),
            soft.len()
        )));
    }
    let score: f64 = weights.iter().zip(soft).map(|(w, s)| w * s).sum();
    let t = lse_threshold(weights);
    Ok(FusionResult {
        score,
        decision: if score > t { ClassLabel::Omega2 } else { ClassLabel::Omega1 },
        selected_member: None,
        per_member_weights: None,
    })
}

/// DCS-LA: the member with the highest (optionally prior-multiplied) local
/// accuracy dictates the decision. Ties select the lowest member index.
pub fn combine_dcs_la(
    lae_handles: &[LaeEstimator],
    priors: Option<&[PriorCompetence]>,
    soft: &[f64],
    hard: &[ClassLabel],
) -> Result<FusionResult> {
    let k = lae_handles.len();
    if k == 0 || soft.len() != k || hard.len() != k {
        return Err(FusionError::InvalidPlan("DCS-LA inputs must share length K >= 1".into()));
    }
    let mut best_idx = 0;
    let mut best_p = f64::NEG_INFINITY;
    for i in 0..k {
        let mut p = lae_handles[i].local_accuracy(soft[i]);
        if let Some(pr) = priors {
            p *= pr[i].p;
        }
        if p > best_p {
            best_p = p;
            best_idx = i;
        }
    }
    Ok(FusionResult {
        score: best_p,
        decision: hard[best_idx],
        selected_member: Some(best_idx),
        per_member_weights: None,
    })
}

/// Half-range thresholding: Omega2 iff score > (lo + hi) / 2.
pub fn threshold_decide(score: f64, lo: f64, hi: f64) -> ClassLabel {
    let t = 0.5 * (lo + hi);
    if score > t {
        ClassLabel::Omega2
    } else {
        ClassLabel::Omega1
    }
}
