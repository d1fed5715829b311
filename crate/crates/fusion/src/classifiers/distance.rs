//! Distance kernels for the weighted k-NN classifier.

use serde::{Deserialize, Serialize};

/// Supported distance kernels. Mahalanobis uses an inverse covariance
/// estimated from the (projected) training features at fit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceKind {
    Euclidean,
    Cityblock,
    Minkowski { p: f64 },
    Cosine,
    Correlation,
    Mahalanobis,
    Chebychev,
    Hamming,
}

impl Default for DistanceKind {
    fn default() -> Self {
        DistanceKind::Euclidean
    }
}

/// Evaluates one distance. `inv_cov` is only consulted by Mahalanobis
/// (row-major, dim x dim).
pub fn distance(kind: DistanceKind, a: &[f64], b: &[f64], inv_cov: Option<&[f64]>) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    match kind {
        DistanceKind::Euclidean => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        DistanceKind::Cityblock => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        DistanceKind::Minkowski { p } => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p),
        DistanceKind::Chebychev => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max),
        DistanceKind::Hamming => {
            let diff = a.iter().zip(b).filter(|(x, y)| x != y).count();
            diff as f64 / a.len() as f64
        }
        DistanceKind::Cosine => {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            if na == 0.0 || nb == 0.0 {
                // zero vector: maximal distance, keeps the metric NaN-free
                1.0
            } else {
                1.0 - dot / (na * nb)
            }
        }
        DistanceKind::Correlation => {
            let n = a.len() as f64;
            let ma = a.iter().sum::<f64>() / n;
            let mb = b.iter().sum::<f64>() / n;
            let ca: Vec<f64> = a.iter().map(|x| x - ma).collect();
            let cb: Vec<f64> = b.iter().map(|x| x - mb).collect();
            let dot: f64 = ca.iter().zip(&cb).map(|(x, y)| x * y).sum();
            let na: f64 = ca.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb: f64 = cb.iter().map(|x| x * x).sum::<f64>().sqrt();
            if na == 0.0 || nb == 0.0 {
                // constant vector has no correlation: maximal distance
                1.0
            } else {
                1.0 - dot / (na * nb)
            }
        }
        DistanceKind::Mahalanobis => {
            let m = inv_cov.expect("Mahalanobis requires a fitted inverse covariance");
            let dim = a.len();
            let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            let mut q = 0.0;
            for i in 0..dim {
                let mut row = 0.0;
                for j in 0..dim {
                    row += m[i * dim + j] * d[j];
                }
                q += d[i] * row;
            }
            q.max(0.0).sqrt()
        }
    }
}
