//! Two-class decision fusion: feature-subspace ensembles of simple
//! classifiers combined by weighted majority rules with local accuracy
//! estimation.
//!
//! The crate is organized bottom-up:
//! - [`types`]: labels, samples, datasets, raw ensemble outputs
//! - [`classifiers`]: weighted k-NN and binary decision trees
//! - [`lae`]: local (soft-output-conditioned) accuracy estimation
//! - [`combiners`]: the eight combination rules
//! - [`subspace`]: feature ranking and fair subspace partitioning
//! - [`evaluation`]: realization loops, improvement tables, ranking
//! - [`data`]: synthetic generators and CSV ingestion

pub mod classifiers;
pub mod combiners;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod interp;
pub mod lae;
pub mod subspace;
pub mod types;

pub use classifiers::{
    ensemble_outputs, CartMode, CartParams, ClassifierParams, DistanceKind, SplitCriterion,
    TrainedClassifier, WeightingKind, WknnParams,
};
pub use combiners::{FittedRule, FusionResult, RuleKind};
pub use data::{export_csv, generate_dataset, ingest_csv, GeneratorKind, LabelColumn};
pub use error::{FusionError, Result};
pub use evaluation::{
    accuracy, bhattacharyya_distance, run_cell, split_realization, wborda_rank, CellArchive,
    CellResult, CellRun, EnsembleFit, ExperimentPlan, PointRecord, RankingTable, RuleTotal,
};
pub use lae::{fit_lae, prior_competence, BinSpec, LaeEstimator, PriorCompetence};
pub use subspace::{fair_partition, rank_features, FeatureRanking, SubspacePartition};
pub use types::{ClassLabel, ClassifierKind, ClassifierOutputs, Dataset, Sample};
