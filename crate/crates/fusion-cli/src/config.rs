//! Experiment configuration file: TOML with strict key checking. Every
//! plan is validated before any work starts.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use fusion::classifiers::{
    CartMode, CartParams, ClassifierParams, DistanceKind, SplitCriterion, WeightingKind, WknnParams,
};
use fusion::combiners::RuleKind;
use fusion::data::generators::GeneratorKind;
use fusion::evaluation::ExperimentPlan;
use fusion::types::ClassifierKind;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: u64,
    pub out_dir: PathBuf,
    #[serde(rename = "experiment")]
    pub experiments: Vec<ExperimentConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Display name; defaults to the dataset name.
    pub name: Option<String>,
    pub dataset: DatasetConfig,
    pub classifier: ClassifierConfig,
    pub train_size: usize,
    pub test_size: usize,
    #[serde(default = "default_validation_fraction")]
    pub validation_fraction: f64,
    pub k_splits: Vec<usize>,
    pub realizations: usize,
    /// Defaults to all eight rules.
    pub rules: Option<Vec<RuleKind>>,
}

fn default_validation_fraction() -> f64 {
    0.3
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub generator: Option<String>,
    pub n: Option<usize>,
    pub csv: Option<PathBuf>,
    pub label_column: Option<toml::Value>,
    pub positive_label: Option<String>,
}

/// Flat classifier table: `kind` selects which of the remaining keys are
/// legal, checked in `validate` so typos and mixed-kind keys both fail.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierConfig {
    pub kind: String,
    pub k: Option<usize>,
    pub distance: Option<String>,
    pub minkowski_p: Option<f64>,
    pub weighting: Option<String>,
    pub criterion: Option<String>,
    pub min_split: Option<usize>,
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let config: ConfigFile =
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if config.experiments.is_empty() {
        return Err(CliError::Config("no [[experiment]] tables".into()));
    }
    Ok(config)
}

pub struct ResolvedExperiment {
    pub name: String,
    pub dataset: fusion::types::Dataset,
    pub plan: ExperimentPlan,
}

impl ExperimentConfig {
    pub fn resolve(&self, seed: u64) -> Result<ResolvedExperiment, CliError> {
        let dataset = self.dataset.load(seed)?;
        let (kind, params) = self.classifier.build()?;
        let rules = self.rules.clone().unwrap_or_else(|| RuleKind::ALL.to_vec());
        let plan = ExperimentPlan {
            dataset_name: dataset.name.clone(),
            train_size: self.train_size,
            test_size: self.test_size,
            validation_fraction: self.validation_fraction,
            k_splits: self.k_splits.clone(),
            classifier_kind: kind,
            classifier_params: params,
            rules,
            n_realizations: self.realizations,
            rng_seed: seed,
        };
        plan.validate(dataset.len())
            .map_err(|e| CliError::Config(e.to_string()))?;
        let name = self
            .name
            .clone()
            .unwrap_or_else(|| format!("{}-{}", dataset.name, self.classifier.kind));
        Ok(ResolvedExperiment { name, dataset, plan })
    }
}

impl DatasetConfig {
    pub fn load(&self, seed: u64) -> Result<fusion::types::Dataset, CliError> {
        match (&self.generator, &self.csv) {
            (Some(gen), None) => {
                let n = self.n.ok_or_else(|| {
                    CliError::Config("generator dataset needs `n`".into())
                })?;
                if self.label_column.is_some() || self.positive_label.is_some() {
                    return Err(CliError::Config(
                        "label_column/positive_label apply only to csv datasets".into(),
                    ));
                }
                let kind =
                    GeneratorKind::parse(gen).map_err(|e| CliError::Config(e.to_string()))?;
                fusion::data::generators::generate_dataset(kind, n, seed)
                    .map_err(|e| CliError::Run(e.to_string()))
            }
            (None, Some(path)) => {
                if self.n.is_some() {
                    return Err(CliError::Config("`n` applies only to generator datasets".into()));
                }
                let label = label_column(self.label_column.as_ref())?;
                let positive = self.positive_label.as_deref().ok_or_else(|| {
                    CliError::Config("csv dataset needs `positive_label`".into())
                })?;
                fusion::data::csv_io::ingest_csv(path, &label, positive)
                    .map_err(|e| CliError::Run(e.to_string()))
            }
            _ => Err(CliError::Config(
                "dataset needs exactly one of `generator` or `csv`".into(),
            )),
        }
    }
}

pub fn label_column(
    value: Option<&toml::Value>,
) -> Result<fusion::data::csv_io::LabelColumn, CliError> {
    use fusion::data::csv_io::LabelColumn;
    match value {
        Some(toml::Value::String(s)) => Ok(LabelColumn::Name(s.clone())),
        Some(toml::Value::Integer(i)) if *i >= 0 => Ok(LabelColumn::Index(*i as usize)),
        Some(other) => Err(CliError::Config(format!(
            "label_column must be a column name or non-negative index, got {other}"
        ))),
        None => Err(CliError::Config("csv dataset needs `label_column`".into())),
    }
}

impl ClassifierConfig {
    pub fn build(&self) -> Result<(ClassifierKind, ClassifierParams), CliError> {
        match self.kind.as_str() {
            "wknn" => {
                if self.criterion.is_some() || self.min_split.is_some() {
                    return Err(CliError::Config(
                        "criterion/min_split apply only to kind = \"cart\"".into(),
                    ));
                }
                let k = self.k.unwrap_or(1);
                if k == 0 || k % 2 == 0 {
                    return Err(CliError::Config(format!("k must be a positive odd integer, got {k}")));
                }
                let distance = match self.distance.as_deref().unwrap_or("euclidean") {
                    "euclidean" => DistanceKind::Euclidean,
                    "cityblock" => DistanceKind::Cityblock,
                    "minkowski" => DistanceKind::Minkowski {
                        p: self.minkowski_p.unwrap_or(3.0),
                    },
                    "cosine" => DistanceKind::Cosine,
                    "correlation" => DistanceKind::Correlation,
                    "mahalanobis" => DistanceKind::Mahalanobis,
                    "chebychev" => DistanceKind::Chebychev,
                    "hamming" => DistanceKind::Hamming,
                    other => {
                        return Err(CliError::Config(format!("unknown distance `{other}`")))
                    }
                };
                if self.minkowski_p.is_some() && !matches!(distance, DistanceKind::Minkowski { .. }) {
                    return Err(CliError::Config(
                        "minkowski_p applies only to distance = \"minkowski\"".into(),
                    ));
                }
                let weighting = match self.weighting.as_deref().unwrap_or("constant") {
                    "constant" => WeightingKind::Constant,
                    "linear" => WeightingKind::Linear,
                    "gaussian" => WeightingKind::Gaussian,
                    other => {
                        return Err(CliError::Config(format!("unknown weighting `{other}`")))
                    }
                };
                Ok((
                    ClassifierKind::Wknn,
                    ClassifierParams::Wknn(WknnParams { k, distance, weighting }),
                ))
            }
            "cart" => {
                if self.k.is_some()
                    || self.distance.is_some()
                    || self.minkowski_p.is_some()
                    || self.weighting.is_some()
                {
                    return Err(CliError::Config(
                        "k/distance/minkowski_p/weighting apply only to kind = \"wknn\"".into(),
                    ));
                }
                let criterion = match self.criterion.as_deref().unwrap_or("gini") {
                    "gini" => SplitCriterion::Gini,
                    "twoing" => SplitCriterion::Twoing,
                    "deviance" => SplitCriterion::Deviance,
                    other => {
                        return Err(CliError::Config(format!("unknown criterion `{other}`")))
                    }
                };
                Ok((
                    ClassifierKind::Cart,
                    ClassifierParams::Cart(CartParams {
                        split_criterion: criterion,
                        min_split: self.min_split.unwrap_or(10),
                        mode: CartMode::Classification,
                    }),
                ))
            }
            other => Err(CliError::Config(format!(
                "unknown classifier kind `{other}` (expected wknn or cart)"
            ))),
        }
    }
}
