//! Synthetic benchmark dataset generators (standard published recipes),
//! deterministic per seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::types::{ClassLabel, Dataset, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeneratorKind {
    Twonorm,
    Ringnorm,
    Waveform,
}

impl GeneratorKind {
    pub fn parse(name: &str) -> Result<GeneratorKind> {
        match name.to_ascii_lowercase().as_str() {
            "twonorm" => Ok(GeneratorKind::Twonorm),
            "ringnorm" => Ok(GeneratorKind::Ringnorm),
            "waveform" => Ok(GeneratorKind::Waveform),
            other => Err(FusionError::UnknownGenerator(other.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Twonorm => "twonorm",
            GeneratorKind::Ringnorm => "ringnorm",
            GeneratorKind::Waveform => "waveform",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            GeneratorKind::Twonorm | GeneratorKind::Ringnorm => 20,
            GeneratorKind::Waveform => 21,
        }
    }
}

/// Balanced binary dataset of `n` samples; class membership is an even
/// coin per sample, so the balance is exact only in expectation.
pub fn generate_dataset(kind: GeneratorKind, n: usize, seed: u64) -> Result<Dataset> {
    if n < 2 {
        return Err(FusionError::InsufficientData { needed: 2, got: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let label = if rng.random::<bool>() { ClassLabel::Omega2 } else { ClassLabel::Omega1 };
        let features = match kind {
            GeneratorKind::Twonorm => twonorm_sample(label, &mut rng),
            GeneratorKind::Ringnorm => ringnorm_sample(label, &mut rng),
            GeneratorKind::Waveform => waveform_sample(label, &mut rng),
        };
        samples.push(Sample::new(features));
        labels.push(label);
    }
    let mut d = Dataset::new(kind.name(), samples, labels)?;
    d.feature_names = Some((0..kind.dimension()).map(|i| format!("f{i}")).collect());
    Ok(d)
}

const TWONORM_DIM: usize = 20;

fn twonorm_shift() -> f64 {
    2.0 / (TWONORM_DIM as f64).sqrt()
}

/// Two unit-covariance Gaussians at +/-(a, ..., a), a = 2/sqrt(20).
fn twonorm_sample(label: ClassLabel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let a = match label {
        ClassLabel::Omega2 => twonorm_shift(),
        ClassLabel::Omega1 => -twonorm_shift(),
    };
    (0..TWONORM_DIM)
        .map(|_| a + rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Omega1 ~ N(0, 4I); Omega2 ~ N((a, ..., a), I), a = 2/sqrt(20).
fn ringnorm_sample(label: ClassLabel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match label {
        ClassLabel::Omega1 => (0..TWONORM_DIM)
            .map(|_| 2.0 * rng.sample::<f64, _>(StandardNormal))
            .collect(),
        ClassLabel::Omega2 => {
            let a = twonorm_shift();
            (0..TWONORM_DIM)
                .map(|_| a + rng.sample::<f64, _>(StandardNormal))
                .collect()
        }
    }
}

const WAVEFORM_DIM: usize = 21;

fn base_wave(center: f64, i: usize) -> f64 {
    (6.0 - ((i + 1) as f64 - center).abs()).max(0.0)
}

/// Convex combinations of two triangular base waves plus unit noise.
/// The dichotomy keeps two of the canonical three classes: Omega1 mixes
/// waves 1 and 2, Omega2 mixes waves 1 and 3.
fn waveform_sample(label: ClassLabel, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let u: f64 = rng.random();
    let noise = Normal::new(0.0, 1.0).unwrap();
    let (c1, c2) = match label {
        ClassLabel::Omega1 => (11.0, 7.0),
        ClassLabel::Omega2 => (11.0, 15.0),
    };
    (0..WAVEFORM_DIM)
        .map(|i| u * base_wave(c1, i) + (1.0 - u) * base_wave(c2, i) + noise.sample(rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_and_balance() {
        for kind in [GeneratorKind::Twonorm, GeneratorKind::Ringnorm, GeneratorKind::Waveform] {
            let d = generate_dataset(kind, 2000, 1).unwrap();
            assert_eq!(d.len(), 2000);
            assert_eq!(d.dimension(), kind.dimension());
            let n2 = d.labels.iter().filter(|&&l| l == ClassLabel::Omega2).count();
            // binomial(2000, 0.5): 5 sigma is about 112
            assert!((n2 as i64 - 1000).abs() < 150, "imbalance: {n2}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_dataset(GeneratorKind::Twonorm, 100, 7).unwrap();
        let b = generate_dataset(GeneratorKind::Twonorm, 100, 7).unwrap();
        assert_eq!(a, b);
        let c = generate_dataset(GeneratorKind::Twonorm, 100, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn parse_names() {
        assert_eq!(GeneratorKind::parse("TwoNorm").unwrap(), GeneratorKind::Twonorm);
        assert!(GeneratorKind::parse("spiral").is_err());
    }

    #[test]
    fn twonorm_oracle_accuracy_near_bayes_rate() {
        // the optimal rule for two symmetric unit-covariance Gaussians is
        // the sign of the projection onto the mean direction; its accuracy
        // is Phi(2) ~ 0.977
        let d = generate_dataset(GeneratorKind::Twonorm, 100_000, 11).unwrap();
        let correct = d
            .samples
            .iter()
            .zip(&d.labels)
            .filter(|(s, &l)| {
                let proj: f64 = s.features.iter().sum();
                let pred = if proj > 0.0 { ClassLabel::Omega2 } else { ClassLabel::Omega1 };
                pred == l
            })
            .count();
        let acc = correct as f64 / d.len() as f64;
        assert!((0.97..0.985).contains(&acc), "oracle accuracy {acc}");
    }
}
