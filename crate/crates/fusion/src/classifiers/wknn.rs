//! Weighted k-nearest-neighbor classifier with pluggable distance kernels
//! and fixed (non-trained) neighbor weighting profiles.

use serde::{Deserialize, Serialize};

use super::distance::{distance, DistanceKind};
use crate::error::{FusionError, Result};
use crate::types::{hard_from_soft, ClassLabel, Dataset, Sample};

/// Neighbor weighting profile. The largest weight always goes to the
/// closest neighbor, the smallest to the k-th.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightingKind {
    Constant,
    Linear,
    Gaussian,
}

impl Default for WeightingKind {
    fn default() -> Self {
        WeightingKind::Constant
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WknnParams {
    pub k: usize,
    pub distance: DistanceKind,
    pub weighting: WeightingKind,
}

impl Default for WknnParams {
    fn default() -> Self {
        WknnParams {
            k: 1,
            distance: DistanceKind::Euclidean,
            weighting: WeightingKind::Constant,
        }
    }
}

/// Fitted w/k-NN model: the projected training set plus, for Mahalanobis,
/// a regularized inverse covariance of the projected features.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WknnModel {
    pub params: WknnParams,
    pub feature_indices: Vec<usize>,
    pub full_dimension: usize,
    train_features: Vec<Vec<f64>>,
    train_labels: Vec<ClassLabel>,
    inv_cov: Option<Vec<f64>>,
}

pub fn train_wknn(train: &Dataset, feature_indices: &[usize], params: WknnParams) -> Result<WknnModel> {
    if feature_indices.is_empty() {
        return Err(FusionError::EmptyFeatureSet);
    }
    if params.k == 0 || params.k > train.len() {
        return Err(FusionError::KTooLarge {
            k: params.k,
            n: train.len(),
        });
    }
    if let DistanceKind::Minkowski { p } = params.distance {
        if !(p.is_finite() && p > 0.0) {
            return Err(FusionError::OutOfRange(p, "finite positive Minkowski exponent"));
        }
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
    let train_features: Vec<Vec<f64>> = train
        .samples
        .iter()
        .map(|s| feature_indices.iter().map(|&f| s.features[f]).collect())
        .collect();
    let inv_cov = match params.distance {
        DistanceKind::Mahalanobis => Some(regularized_inverse_covariance(&train_features)),
        _ => None,
    };
    Ok(WknnModel {
        params,
        feature_indices: feature_indices.to_vec(),
        full_dimension,
        train_labels: train.labels.clone(),
        train_features,
        inv_cov,
    })
}

/// Inverse of (sample covariance + lambda*I), lambda = 1e-6 * trace / dim.
/// Projected subspaces can be rank-deficient.
pub fn regularized_inverse_covariance(rows: &[Vec<f64>]) -> Vec<f64> {
    let cov = covariance(rows);
    invert_regularized(&cov)
}

pub(crate) fn covariance(rows: &[Vec<f64>]) -> nalgebra::DMatrix<f64> {
    let n = rows.len();
    let dim = rows[0].len();
    let mut mean = vec![0.0; dim];
    for r in rows {
        for (m, v) in mean.iter_mut().zip(r) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut cov = nalgebra::DMatrix::zeros(dim, dim);
    for r in rows {
        for i in 0..dim {
            for j in 0..dim {
                cov[(i, j)] += (r[i] - mean[i]) * (r[j] - mean[j]);
            }
        }
    }
    let denom = if n > 1 { (n - 1) as f64 } else { 1.0 };
    cov / denom
}

pub(crate) fn invert_regularized(cov: &nalgebra::DMatrix<f64>) -> Vec<f64> {
    let dim = cov.nrows();
    let lambda = 1e-6 * cov.trace() / dim as f64;
    let lambda = if lambda > 0.0 { lambda } else { 1e-12 };
    let reg = cov + nalgebra::DMatrix::identity(dim, dim) * lambda;
    let inv = reg
        .try_inverse()
        .expect("regularized covariance must be invertible");
    inv.transpose().as_slice().to_vec() // row-major
}

impl WknnModel {
    /// Returns (soft, hard). `soft` is the weighted Omega2 vote fraction
    /// over the k nearest projected neighbors.
    pub fn predict(&self, sample: &Sample) -> Result<(f64, ClassLabel)> {
        if sample.dimension() != self.full_dimension {
            return Err(FusionError::DimensionMismatch {
                got: sample.dimension(),
                expected: self.full_dimension,
            });
        }
        let query: Vec<f64> = self.feature_indices.iter().map(|&f| sample.features[f]).collect();
        let mut dists: Vec<(f64, usize)> = self
            .train_features
            .iter()
            .enumerate()
            .map(|(i, t)| (distance(self.params.distance, &query, t, self.inv_cov.as_deref()), i))
            .collect();
        // ties broken by training index for determinism
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let k = self.params.k;
        let neighbors = &dists[..k];
        let d_k = neighbors[k - 1].0;

        let mut num = 0.0;
        let mut den = 0.0;
        for (rank, &(d, idx)) in neighbors.iter().enumerate() {
            let w = match self.params.weighting {
                WeightingKind::Constant => 1.0,
                // proportional to k, k-1, ..., 1 from center outwards
                WeightingKind::Linear => (k - rank) as f64 / (k + 1) as f64,
                WeightingKind::Gaussian => {
                    if d_k == 0.0 {
                        1.0
                    } else {
                        let sigma = d_k / 2.0;
                        (-(d / sigma).powi(2)).exp()
                    }
                }
            };
            den += w;
            if self.train_labels[idx] == ClassLabel::Omega2 {
                num += w;
            }
        }
        let soft = (num / den).clamp(0.0, 1.0);
        Ok((soft, hard_from_soft(soft)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tiny(points: &[(Vec<f64>, ClassLabel)]) -> Dataset {
        let samples = points.iter().map(|(f, _)| Sample::new(f.clone())).collect();
        let labels = points.iter().map(|(_, l)| *l).collect();
        Dataset::new("tiny", samples, labels).unwrap()
    }

    #[test]
    fn k1_zero_distance_dominates() {
        let data = tiny(&[
            (vec![0.0, 0.0], ClassLabel::Omega1),
            (vec![1.0, 1.0], ClassLabel::Omega2),
        ]);
        let m = train_wknn(&data, &[0, 1], WknnParams::default()).unwrap();
        let (soft, hard) = m.predict(&Sample::new(vec![1.0, 1.0])).unwrap();
        assert_eq!(soft, 1.0);
        assert_eq!(hard, ClassLabel::Omega2);
        let (soft, hard) = m.predict(&Sample::new(vec![0.0, 0.0])).unwrap();
        assert_eq!(soft, 0.0);
        assert_eq!(hard, ClassLabel::Omega1);
    }

    #[test]
    fn equidistant_k2_tie_goes_omega1() {
        let data = tiny(&[
            (vec![-1.0], ClassLabel::Omega1),
            (vec![1.0], ClassLabel::Omega2),
        ]);
        let params = WknnParams {
            k: 2,
            ..WknnParams::default()
        };
        let m = train_wknn(&data, &[0], params).unwrap();
        let (soft, hard) = m.predict(&Sample::new(vec![0.0])).unwrap();
        assert_abs_diff_eq!(soft, 0.5);
        assert_eq!(hard, ClassLabel::Omega1);
    }

    #[test]
    fn unanimous_neighborhood_is_full_support() {
        let data = tiny(&[
            (vec![0.0], ClassLabel::Omega2),
            (vec![1.0], ClassLabel::Omega2),
            (vec![2.0], ClassLabel::Omega2),
        ]);
        for weighting in [WeightingKind::Constant, WeightingKind::Linear, WeightingKind::Gaussian] {
            let params = WknnParams {
                k: 3,
                weighting,
                ..WknnParams::default()
            };
            let m = train_wknn(&data, &[0], params).unwrap();
            let (soft, _) = m.predict(&Sample::new(vec![0.5])).unwrap();
            assert_abs_diff_eq!(soft, 1.0);
        }
    }

    #[test]
    fn linear_profile_hand_example() {
        // neighbors at distances 0,1,2 with labels (w2, w1, w1);
        // linear weights are proportional to 3,2,1 -> soft = 3/6 = 1/2
        let data = tiny(&[
            (vec![0.0], ClassLabel::Omega2),
            (vec![1.0], ClassLabel::Omega1),
            (vec![2.0], ClassLabel::Omega1),
        ]);
        let params = WknnParams {
            k: 3,
            weighting: WeightingKind::Linear,
            ..WknnParams::default()
        };
        let m = train_wknn(&data, &[0], params).unwrap();
        let (soft, hard) = m.predict(&Sample::new(vec![0.0])).unwrap();
        assert_abs_diff_eq!(soft, 0.5);
        assert_eq!(hard, ClassLabel::Omega1);
    }

    #[test]
    fn constant_profile_equals_vote_fraction() {
        let data = tiny(&[
            (vec![0.0], ClassLabel::Omega2),
            (vec![0.5], ClassLabel::Omega2),
            (vec![1.5], ClassLabel::Omega1),
            (vec![9.0], ClassLabel::Omega1),
        ]);
        let params = WknnParams {
            k: 3,
            ..WknnParams::default()
        };
        let m = train_wknn(&data, &[0], params).unwrap();
        let (soft, _) = m.predict(&Sample::new(vec![0.2])).unwrap();
        assert_abs_diff_eq!(soft, 2.0 / 3.0);
    }

    #[test]
    fn k1_memorizes_training_set() {
        let data = tiny(&[
            (vec![0.0, 1.0], ClassLabel::Omega1),
            (vec![2.0, 3.0], ClassLabel::Omega2),
            (vec![4.0, -1.0], ClassLabel::Omega1),
            (vec![-2.0, 0.5], ClassLabel::Omega2),
        ]);
        let m = train_wknn(&data, &[0, 1], WknnParams::default()).unwrap();
        for (s, l) in data.samples.iter().zip(&data.labels) {
            let (_, hard) = m.predict(s).unwrap();
            assert_eq!(hard, *l);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let data = tiny(&[(vec![0.0], ClassLabel::Omega1), (vec![1.0], ClassLabel::Omega2)]);
        assert!(matches!(
            train_wknn(&data, &[], WknnParams::default()),
            Err(FusionError::EmptyFeatureSet)
        ));
        let params = WknnParams {
            k: 5,
            ..WknnParams::default()
        };
        assert!(matches!(
            train_wknn(&data, &[0], params),
            Err(FusionError::KTooLarge { .. })
        ));
    }

    #[test]
    fn mahalanobis_handles_rank_deficient_subspace() {
        // second feature is a copy of the first: singular covariance
        let data = tiny(&[
            (vec![0.0, 0.0], ClassLabel::Omega1),
            (vec![1.0, 1.0], ClassLabel::Omega2),
            (vec![2.0, 2.0], ClassLabel::Omega2),
        ]);
        let params = WknnParams {
            k: 1,
            distance: DistanceKind::Mahalanobis,
            ..WknnParams::default()
        };
        let m = train_wknn(&data, &[0, 1], params).unwrap();
        let (_, hard) = m.predict(&Sample::new(vec![1.9, 1.9])).unwrap();
        assert_eq!(hard, ClassLabel::Omega2);
    }
}
