//! Base classifiers behind a common trainable interface, so ensembles are
//! classifier-agnostic.

pub mod cart;
pub mod distance;
pub mod wknn;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::types::{ClassLabel, ClassifierOutputs, Dataset, Sample};

pub use cart::{train_cart, CartMode, CartParams, SplitCriterion};
pub use distance::DistanceKind;
pub use wknn::{train_wknn, WeightingKind, WknnParams};

/// Kind-specific parameter record for one ensemble member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierParams {
    Wknn(WknnParams),
    Cart(CartParams),
}

/// A fitted ensemble member. Predict accepts full-dimension samples and
/// projects internally onto the member's feature subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum TrainedClassifier {
    Wknn(wknn::WknnModel),
    Cart(cart::CartModel),
}

impl TrainedClassifier {
    pub fn train(train: &Dataset, feature_indices: &[usize], params: &ClassifierParams) -> Result<TrainedClassifier> {
        match params {
            ClassifierParams::Wknn(p) => Ok(TrainedClassifier::Wknn(train_wknn(train, feature_indices, *p)?)),
            ClassifierParams::Cart(p) => Ok(TrainedClassifier::Cart(train_cart(train, feature_indices, *p)?)),
        }
    }

    pub fn predict(&self, sample: &Sample) -> Result<(f64, ClassLabel)> {
        match self {
            TrainedClassifier::Wknn(m) => m.predict(sample),
            TrainedClassifier::Cart(m) => m.predict(sample),
        }
    }

    pub fn feature_indices(&self) -> &[usize] {
        match self {
            TrainedClassifier::Wknn(m) => &m.feature_indices,
            TrainedClassifier::Cart(m) => &m.feature_indices,
        }
    }
}

/// Runs every model over every sample, producing the K-column soft/hard
/// output matrix consumed by the combination rules.
pub fn ensemble_outputs(models: &[TrainedClassifier], data: &Dataset) -> Result<ClassifierOutputs> {
    let mut soft = Vec::with_capacity(data.len());
    for sample in &data.samples {
        let mut row = Vec::with_capacity(models.len());
        for model in models {
            row.push(model.predict(sample)?.0);
        }
        soft.push(row);
    }
    ClassifierOutputs::from_soft(soft)
}
