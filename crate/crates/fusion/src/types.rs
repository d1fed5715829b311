//! Shared domain vocabulary: samples, labels, classifier outputs and
//! ensemble descriptors. Everything here is immutable after construction.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

/// Binary class label. `Omega2` is the positive class and maps to 1 on the
/// unit scale used for votes, soft scores and regression targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassLabel {
    Omega1,
    Omega2,
}

impl ClassLabel {
    pub fn other(self) -> ClassLabel {
        match self {
            ClassLabel::Omega1 => ClassLabel::Omega2,
            ClassLabel::Omega2 => ClassLabel::Omega1,
        }
    }
}

/// Vote extraction from a soft score in [0,1]. Scores of exactly 1/2 map to
/// `Omega1`: ties resolve deterministically toward the negative class.
pub fn hard_from_soft(soft_score: f64) -> Result<ClassLabel> {
    if !(0.0..=1.0).contains(&soft_score) {
        return Err(FusionError::OutOfRange(soft_score, "[0,1] soft score"));
    }
    Ok(if soft_score > 0.5 {
        ClassLabel::Omega2
    } else {
        ClassLabel::Omega1
    })
}

/// Unit encoding of a label: `Omega1` -> 0, `Omega2` -> 1.
pub fn label_to_unit(label: ClassLabel) -> f64 {
    match label {
        ClassLabel::Omega1 => 0.0,
        ClassLabel::Omega2 => 1.0,
    }
}

/// Inverse of [`label_to_unit`] on {0, 1}.
pub fn unit_to_label(value: f64) -> ClassLabel {
    if value > 0.5 {
        ClassLabel::Omega2
    } else {
        ClassLabel::Omega1
    }
}

/// One feature vector. All values are finite; ingestion rejects NaN/inf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
}

impl Sample {
    pub fn new(features: Vec<f64>) -> Sample {
        Sample { features }
    }

    pub fn dimension(&self) -> usize {
        self.features.len()
    }
}

/// Labeled feature matrix with binary labels — the unit of ingestion,
/// splitting and generation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub name: String,
    pub samples: Vec<Sample>,
    pub labels: Vec<ClassLabel>,
    pub feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset, validating shape and finiteness.
    pub fn new(name: impl Into<String>, samples: Vec<Sample>, labels: Vec<ClassLabel>) -> Result<Dataset> {
        let name = name.into();
        if samples.is_empty() || samples.len() != labels.len() {
            return Err(FusionError::InvalidDataset {
                name,
                reason: format!(
                    "samples ({}) and labels ({}) must be equal and non-empty",
                    samples.len(),
                    labels.len()
                ),
            });
        }
        let dim = samples[0].dimension();
        for (row, s) in samples.iter().enumerate() {
            if s.dimension() != dim {
                return Err(FusionError::InvalidDataset {
                    name,
                    reason: format!("row {row} has dimension {} != {dim}", s.dimension()),
                });
            }
            for (col, v) in s.features.iter().enumerate() {
                if !v.is_finite() {
                    return Err(FusionError::NonFiniteFeature { row, col });
                }
            }
        }
        Ok(Dataset {
            name,
            samples,
            labels,
            feature_names: None,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.samples[0].dimension()
    }

    pub fn has_both_classes(&self) -> bool {
        self.labels.contains(&ClassLabel::Omega1) && self.labels.contains(&ClassLabel::Omega2)
    }

    /// Row subset by index; indices must be in range.
    pub fn subset(&self, indices: &[usize], name: impl Into<String>) -> Result<Dataset> {
        let samples = indices.iter().map(|&i| self.samples[i].clone()).collect();
        let labels = indices.iter().map(|&i| self.labels[i]).collect();
        let mut d = Dataset::new(name, samples, labels)?;
        d.feature_names = self.feature_names.clone();
        Ok(d)
    }
}

/// Per-sample soft score and hard vote from each of the K ensemble members.
/// `soft[s][i]` is member i's support for `Omega2` on sample s; `hard` is
/// derived by thresholding soft at 1/2.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifierOutputs {
    pub soft: Vec<Vec<f64>>,
    pub hard: Vec<Vec<ClassLabel>>,
}

impl ClassifierOutputs {
    pub fn from_soft(soft: Vec<Vec<f64>>) -> Result<ClassifierOutputs> {
        let mut hard = Vec::with_capacity(soft.len());
        for row in &soft {
            let mut h = Vec::with_capacity(row.len());
            for &s in row {
                h.push(hard_from_soft(s)?);
            }
            hard.push(h);
        }
        Ok(ClassifierOutputs { soft, hard })
    }

    pub fn n_samples(&self) -> usize {
        self.soft.len()
    }

    pub fn k(&self) -> usize {
        self.soft.first().map_or(0, |r| r.len())
    }
}

/// Which base classifier an ensemble uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Wknn,
    Cart,
}

/// Ensemble construction descriptor.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub k_splits: usize,
    pub classifier_kind: ClassifierKind,
    pub rng_seed: u64,
}
