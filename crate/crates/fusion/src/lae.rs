//! Local accuracy estimation: per-classifier equal-frequency histograms of
//! error rates over the soft-output range, interpolated with a
//! shape-preserving cubic Hermite spline. Maps a soft score to an estimate
//! of P(correct | x).

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::interp::PchipSpline;

/// Bin count selection for the dynamic-width histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinSpec {
    /// max(5, floor(sqrt(N))), capped so every bin holds at least 5 records.
    Auto,
    Fixed(usize),
}

/// Overall validation-set success rate of one classifier, clamped away
/// from {0,1} so log-odds stay finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorCompetence {
    pub p: f64,
}

pub fn prior_competence(correct_flags: &[bool]) -> Result<PriorCompetence> {
    if correct_flags.is_empty() {
        return Err(FusionError::InsufficientData { needed: 1, got: 0 });
    }
    let n = correct_flags.len() as f64;
    let mean = correct_flags.iter().filter(|&&f| f).count() as f64 / n;
    let eps = 1.0 / (2.0 * n);
    Ok(PriorCompetence {
        p: mean.clamp(eps, 1.0 - eps),
    })
}

/// Fitted local accuracy estimator for one classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaeEstimator {
    pub bin_edges: Vec<f64>,
    pub bin_counts: Vec<usize>,
    pub bin_error_counts: Vec<usize>,
    /// Per-bin median of the soft scores; the spline knot abscissae.
    pub bin_centers: Vec<f64>,
    spline: PchipSpline,
    pub clamp_eps: f64,
    bins: BinSpec,
    /// Validation records (score, correct) retained so updates rebuild the
    /// histogram over the full evaluation history.
    records: Vec<(f64, bool)>,
}

pub fn fit_lae(soft_scores: &[f64], correct_flags: &[bool], n_bins: BinSpec) -> Result<LaeEstimator> {
    if soft_scores.len() != correct_flags.len() {
        return Err(FusionError::InsufficientData {
            needed: soft_scores.len(),
            got: correct_flags.len(),
        });
    }
    if soft_scores.is_empty() {
        return Err(FusionError::InsufficientData { needed: 2, got: 0 });
    }
    if let Some(&bad) = soft_scores.iter().find(|s| !s.is_finite()) {
        return Err(FusionError::OutOfRange(bad, "finite soft score"));
    }
    let records: Vec<(f64, bool)> = soft_scores
        .iter()
        .copied()
        .zip(correct_flags.iter().copied())
        .collect();
    fit_records(records, n_bins)
}

fn resolve_bin_count(n: usize, spec: BinSpec) -> usize {
    match spec {
        BinSpec::Auto => {
            let m = ((n as f64).sqrt().floor() as usize).max(5);
            m.min(n / 5).max(1)
        }
        // requested counts with fewer than 2 samples per bin shrink automatically
        BinSpec::Fixed(m) => {
            if n >= 2 * m {
                m.max(1)
            } else {
                (n / 2).max(1)
            }
        }
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn fit_records(records: Vec<(f64, bool)>, bins: BinSpec) -> Result<LaeEstimator> {
    let n = records.len();
    let m_target = resolve_bin_count(n, bins);

    let mut sorted = records.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());

    // equal-frequency cut positions; tied score values never straddle an
    // edge, so a run of equal scores lands in a single bin
    let mut cuts: Vec<usize> = Vec::new();
    let mut prev = 0usize;
    for m in 1..m_target {
        let mut pos = ((m * n) as f64 / m_target as f64).round() as usize;
        if pos <= prev {
            pos = prev + 1;
        }
        while pos < n && sorted[pos].0 == sorted[pos - 1].0 {
            pos += 1;
        }
        if pos >= n {
            break;
        }
        cuts.push(pos);
        prev = pos;
    }

    let mut starts = vec![0usize];
    starts.extend(&cuts);
    let mut ends = cuts.clone();
    ends.push(n);
    let m_actual = starts.len();

    let mut bin_edges = Vec::with_capacity(m_actual + 1);
    let mut bin_counts = Vec::with_capacity(m_actual);
    let mut bin_error_counts = Vec::with_capacity(m_actual);
    let mut bin_centers = Vec::with_capacity(m_actual);
    let mut error_rates = Vec::with_capacity(m_actual);

    let lo = sorted[0].0;
    let hi = sorted[n - 1].0;
    if lo == hi {
        // all scores identical: single degenerate bin around the value
        bin_edges.push(lo - 0.5);
        bin_edges.push(lo + 0.5);
    } else {
        bin_edges.push(lo);
        for &c in &cuts {
            bin_edges.push(0.5 * (sorted[c - 1].0 + sorted[c].0));
        }
        bin_edges.push(hi);
    }

    for (&s, &e) in starts.iter().zip(&ends) {
        let slice = &sorted[s..e];
        let count = slice.len();
        let errors = slice.iter().filter(|(_, correct)| !correct).count();
        let vals: Vec<f64> = slice.iter().map(|(v, _)| *v).collect();
        bin_counts.push(count);
        bin_error_counts.push(errors);
        bin_centers.push(median(&vals));
        error_rates.push(errors as f64 / count as f64);
    }

    let spline = PchipSpline::fit(&bin_centers, &error_rates);
    Ok(LaeEstimator {
        bin_edges,
        bin_counts,
        bin_error_counts,
        bin_centers,
        spline,
        clamp_eps: 1.0 / (2.0 * n as f64),
        bins,
        records,
    })
}

impl LaeEstimator {
    pub fn n_bins(&self) -> usize {
        self.bin_counts.len()
    }

    pub fn n_records(&self) -> usize {
        self.records.len()
    }

    /// Observed range of the validation scores.
    pub fn score_range(&self) -> (f64, f64) {
        let min = self.records.iter().map(|(s, _)| *s).fold(f64::INFINITY, f64::min);
        let max = self.records.iter().map(|(s, _)| *s).fold(f64::NEG_INFINITY, f64::max);
        (min, max)
    }

    /// Interpolated error probability, clamped to [eps, 1-eps]. Scores
    /// outside the knot range evaluate at the nearest knot.
    pub fn local_error(&self, soft_score: f64) -> f64 {
        self.spline
            .eval(soft_score)
            .clamp(self.clamp_eps, 1.0 - self.clamp_eps)
    }

    /// Estimated P(correct | x) = 1 - error probability, clamped to
    /// [eps, 1-eps]. Clamped independently of `local_error` because
    /// 1 - (1 - eps) can round a few ulps below eps.
    pub fn local_accuracy(&self, soft_score: f64) -> f64 {
        (1.0 - self.raw_error(soft_score)).clamp(self.clamp_eps, 1.0 - self.clamp_eps)
    }

    /// Raw (unclamped) interpolated error probability.
    pub fn raw_error(&self, soft_score: f64) -> f64 {
        self.spline.eval(soft_score)
    }

    /// Rebuilds the estimator over the union of the retained records and
    /// the new evaluation results. Equivalent to refitting from scratch on
    /// the concatenated data.
    pub fn update(&self, new_scores: &[f64], new_flags: &[bool]) -> Result<LaeEstimator> {
        if new_scores.len() != new_flags.len() {
            return Err(FusionError::InsufficientData {
                needed: new_scores.len(),
                got: new_flags.len(),
            });
        }
        let mut records = self.records.clone();
        records.extend(new_scores.iter().copied().zip(new_flags.iter().copied()));
        fit_records(records, self.bins)
    }
}
