//! Experiment orchestration: train/validation/test splitting, realization
//! loops, per-rule accuracy improvements, wBorda ranking across cells and
//! dataset characterization.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{ensemble_outputs, ClassifierParams, TrainedClassifier};
use crate::combiners::{
    combine_dcs_la, combine_lse, combine_maximum, combine_simple_average, combine_simple_majority,
    combine_wmr, fit_lse_weights, fit_wmr_adaptive_weights, fit_wmr_static, FusionResult, RuleKind,
};
use crate::error::{FusionError, Result};
use crate::lae::{fit_lae, prior_competence, BinSpec, LaeEstimator, PriorCompetence};
use crate::subspace::{fair_partition, rank_features};
use crate::types::{ClassLabel, ClassifierKind, Dataset};

/// One experiment configuration: dataset source sizes, ensemble shape,
/// rules and realization count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub dataset_name: String,
    pub train_size: usize,
    pub test_size: usize,
    /// Fraction of the training slice carved out for competence
    /// estimation (LAE, priors, LSE weights). Must be in (0,1).
    pub validation_fraction: f64,
    pub k_splits: Vec<usize>,
    pub classifier_kind: ClassifierKind,
    pub classifier_params: ClassifierParams,
    pub rules: Vec<RuleKind>,
    pub n_realizations: usize,
    pub rng_seed: u64,
}

impl ExperimentPlan {
    pub fn validate(&self, dataset_len: usize) -> Result<()> {
        if !(self.validation_fraction > 0.0 && self.validation_fraction < 1.0) {
            return Err(FusionError::InvalidPlan(
                "validation_fraction must lie in (0,1): LAE-based rules need validation data".into(),
            ));
        }
        if self.train_size + self.test_size > dataset_len {
            return Err(FusionError::InvalidPlan(format!(
                "train {} + test {} exceeds dataset size {dataset_len}",
                self.train_size, self.test_size
            )));
        }
        if self.n_realizations == 0 || self.rules.is_empty() || self.k_splits.is_empty() {
            return Err(FusionError::InvalidPlan(
                "need at least one realization, rule and k value".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic (seed, realization) split into member-training,
/// validation and test slices. The three index sets are disjoint.
pub fn split_realization(
    data: &Dataset,
    plan: &ExperimentPlan,
    realization_index: usize,
) -> Result<(Dataset, Dataset, Dataset)> {
    plan.validate(data.len())?;
    let mut rng = ChaCha8Rng::seed_from_u64(plan.rng_seed);
    rng.set_stream(realization_index as u64 + 1);
    let mut indices: Vec<usize> = (0..data.len()).collect();
    indices.shuffle(&mut rng);

    let n_val = ((plan.train_size as f64) * plan.validation_fraction).round() as usize;
    let n_member = plan.train_size - n_val;
    if n_member == 0 || n_val == 0 {
        return Err(FusionError::InvalidPlan(format!(
            "train_size {} with fraction {} leaves an empty slice",
            plan.train_size, plan.validation_fraction
        )));
    }
    let member = data.subset(&indices[..n_member], format!("{}-train", data.name))?;
    let validation = data.subset(
        &indices[n_member..plan.train_size],
        format!("{}-validation", data.name),
    )?;
    let test = data.subset(
        &indices[plan.train_size..plan.train_size + plan.test_size],
        format!("{}-test", data.name),
    )?;
    Ok((member, validation, test))
}

/// Classification accuracy as a percentage.
pub fn accuracy(predictions: &[ClassLabel], truth: &[ClassLabel]) -> Result<f64> {
    if predictions.is_empty() || predictions.len() != truth.len() {
        return Err(FusionError::InsufficientData {
            needed: truth.len().max(1),
            got: predictions.len(),
        });
    }
    let matches = predictions.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(100.0 * matches as f64 / predictions.len() as f64)
}

/// Validation-fitted fusion state for one ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleFit {
    pub lae: Vec<LaeEstimator>,
    pub priors: Vec<PriorCompetence>,
    pub static_weights: Vec<f64>,
    pub lse_weights: Vec<f64>,
}

/// Fits LAE estimators, prior competencies, static WMR weights and LSE
/// weights from the members' validation outputs.
pub fn fit_ensemble(
    validation_soft: &[Vec<f64>],
    validation_hard: &[Vec<ClassLabel>],
    validation_truth: &[ClassLabel],
) -> Result<EnsembleFit> {
    let k = validation_soft.first().map_or(0, |r| r.len());
    if k == 0 {
        return Err(FusionError::InsufficientData { needed: 1, got: 0 });
    }
    let mut lae = Vec::with_capacity(k);
    let mut priors = Vec::with_capacity(k);
    for member in 0..k {
        let scores: Vec<f64> = validation_soft.iter().map(|r| r[member]).collect();
        let flags: Vec<bool> = validation_hard
            .iter()
            .zip(validation_truth)
            .map(|(r, &t)| r[member] == t)
            .collect();
        lae.push(fit_lae(&scores, &flags, BinSpec::Auto)?);
        priors.push(prior_competence(&flags)?);
    }
    let static_weights = fit_wmr_static(&priors)?
        .static_weights
        .expect("static WMR always stores weights");
    let lse_weights = fit_lse_weights(validation_soft, validation_truth)?
        .lse_weights
        .expect("LSE fit always stores weights");
    Ok(EnsembleFit {
        lae,
        priors,
        static_weights,
        lse_weights,
    })
}

/// Applies one rule to one sample's member outputs.
pub fn decide(
    rule: RuleKind,
    fit: &EnsembleFit,
    soft: &[f64],
    hard: &[ClassLabel],
) -> Result<FusionResult> {
    match rule {
        RuleKind::WmrStatic => combine_wmr(&fit.static_weights, hard),
        RuleKind::WmrAdaptive => {
            let w = fit_wmr_adaptive_weights(&fit.lae, soft)?;
            combine_wmr(&w, hard)
        }
        RuleKind::SimpleMajority => combine_simple_majority(hard),
        RuleKind::Maximum => combine_maximum(soft),
        RuleKind::SimpleAverage => combine_simple_average(soft),
        RuleKind::LseWeightedAverage => combine_lse(&fit.lse_weights, soft),
        RuleKind::DcsLaNoPriors => combine_dcs_la(&fit.lae, None, soft, hard),
        RuleKind::DcsLaWithPriors => combine_dcs_la(&fit.lae, Some(&fit.priors), soft, hard),
    }
}

/// Per-(dataset, k, classifier, rule) aggregate over the realizations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellResult {
    pub dataset: String,
    pub k: usize,
    pub classifier: ClassifierKind,
    pub rule: RuleKind,
    /// Ensemble accuracy minus member mean accuracy, averaged over
    /// realizations, in percentage points.
    pub mean_improvement: f64,
    pub mean_ensemble_accuracy: f64,
    pub member_mean_accuracy: f64,
    pub member_max_accuracy: f64,
    pub realizations: usize,
}

/// Fitted artifacts from the first realization, kept for persistence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellArchive {
    pub dataset: String,
    pub k: usize,
    pub classifier: ClassifierKind,
    pub feature_groups: Vec<Vec<usize>>,
    pub fit: EnsembleFit,
}

#[derive(Debug, Clone)]
pub struct CellRun {
    pub cells: Vec<CellResult>,
    pub archive: CellArchive,
}

struct RealizationOutcome {
    rule_accuracy: Vec<f64>,
    member_mean: f64,
    member_max: f64,
    archive: Option<CellArchive>,
}

fn run_realization(
    data: &Dataset,
    plan: &ExperimentPlan,
    k: usize,
    realization: usize,
) -> Result<RealizationOutcome> {
    let (member_train, validation, test) = split_realization(data, plan, realization)?;
    if !member_train.has_both_classes() {
        return Err(FusionError::SingleClass);
    }
    let ranking = rank_features(&member_train)?;
    let partition = fair_partition(&ranking, k)?;

    let models: Vec<TrainedClassifier> = partition
        .groups
        .iter()
        .map(|group| TrainedClassifier::train(&member_train, group, &plan.classifier_params))
        .collect::<Result<_>>()?;

    let val_out = ensemble_outputs(&models, &validation)?;
    let fit = fit_ensemble(&val_out.soft, &val_out.hard, &validation.labels)?;

    let test_out = ensemble_outputs(&models, &test)?;

    let mut member_accs = Vec::with_capacity(k);
    for member in 0..k {
        let preds: Vec<ClassLabel> = test_out.hard.iter().map(|r| r[member]).collect();
        member_accs.push(accuracy(&preds, &test.labels)?);
    }
    let member_mean = member_accs.iter().sum::<f64>() / k as f64;
    let member_max = member_accs.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut rule_accuracy = Vec::with_capacity(plan.rules.len());
    for &rule in &plan.rules {
        let mut preds = Vec::with_capacity(test.len());
        for (soft, hard) in test_out.soft.iter().zip(&test_out.hard) {
            preds.push(decide(rule, &fit, soft, hard)?.decision);
        }
        rule_accuracy.push(accuracy(&preds, &test.labels)?);
    }

    let archive = (realization == 0).then(|| CellArchive {
        dataset: plan.dataset_name.clone(),
        k,
        classifier: plan.classifier_kind,
        feature_groups: partition.groups.clone(),
        fit: fit.clone(),
    });

    Ok(RealizationOutcome {
        rule_accuracy,
        member_mean,
        member_max,
        archive,
    })
}

/// Runs every realization of one (dataset, k) cell: subspace partition,
/// member training, validation fitting and test-set evaluation of every
/// rule in the plan.
pub fn run_cell(data: &Dataset, plan: &ExperimentPlan, k: usize) -> Result<CellRun> {
    plan.validate(data.len())?;
    let outcomes: Vec<RealizationOutcome> = (0..plan.n_realizations)
        .into_par_iter()
        .map(|r| {
            run_realization(data, plan, k, r).map_err(|e| FusionError::Realization {
                dataset: plan.dataset_name.clone(),
                k,
                realization: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    let n = plan.n_realizations as f64;
    let member_mean = outcomes.iter().map(|o| o.member_mean).sum::<f64>() / n;
    let member_max = outcomes.iter().map(|o| o.member_max).sum::<f64>() / n;
    let archive = outcomes
        .iter()
        .find_map(|o| o.archive.clone())
        .expect("realization 0 always produces an archive");

    let cells = plan
        .rules
        .iter()
        .enumerate()
        .map(|(i, &rule)| {
            // improvement is averaged per realization so that
            // ensemble = member_mean + improvement holds exactly
            let ens = outcomes.iter().map(|o| o.rule_accuracy[i]).sum::<f64>() / n;
            CellResult {
                dataset: plan.dataset_name.clone(),
                k,
                classifier: plan.classifier_kind,
                rule,
                mean_improvement: ens - member_mean,
                mean_ensemble_accuracy: ens,
                member_mean_accuracy: member_mean,
                member_max_accuracy: member_max,
                realizations: plan.n_realizations,
            }
        })
        .collect();

    Ok(CellRun { cells, archive })
}

/// wBorda points of one rule within one experiment column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointRecord {
    pub dataset: String,
    pub k: usize,
    pub classifier: ClassifierKind,
    pub rule: RuleKind,
    pub mean_improvement: f64,
    pub points: u32,
}

/// Per-rule totals across every column.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RuleTotal {
    pub rule: RuleKind,
    pub sum: u32,
    pub mean: f64,
    pub stdev: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RankingTable {
    pub cells: Vec<CellResult>,
    pub points: Vec<PointRecord>,
    /// Sorted descending by wBorda sum.
    pub totals: Vec<RuleTotal>,
}

/// Positional points within one column of improvements, starting at 10
/// for the top rule. Exact ties share the higher value and the next
/// distinct improvement continues the count-down.
pub fn wborda_points(improvements: &[f64]) -> Vec<u32> {
    improvements
        .iter()
        .map(|&imp| {
            let mut distinct_better: Vec<f64> = improvements
                .iter()
                .copied()
                .filter(|&other| other > imp)
                .collect();
            distinct_better.sort_by(|a, b| a.partial_cmp(b).unwrap());
            distinct_better.dedup();
            let rank = distinct_better.len() as u32;
            10u32.saturating_sub(rank)
        })
        .collect()
}

/// Groups cells into (dataset, k, classifier) columns, assigns wBorda
/// points per column and totals them per rule.
pub fn wborda_rank(cells: &[CellResult]) -> Result<RankingTable> {
    let mut columns: Vec<(String, usize, ClassifierKind)> = Vec::new();
    for c in cells {
        let key = (c.dataset.clone(), c.k, c.classifier);
        if !columns.contains(&key) {
            columns.push(key);
        }
    }

    let mut points = Vec::new();
    for (dataset, k, classifier) in &columns {
        let column: Vec<&CellResult> = cells
            .iter()
            .filter(|c| &c.dataset == dataset && c.k == *k && c.classifier == *classifier)
            .collect();
        let mut seen = Vec::new();
        for c in &column {
            if seen.contains(&c.rule) {
                return Err(FusionError::InvalidPlan(format!(
                    "rule {:?} appears twice in column ({dataset}, K={k})",
                    c.rule
                )));
            }
            seen.push(c.rule);
        }
        let improvements: Vec<f64> = column.iter().map(|c| c.mean_improvement).collect();
        let pts = wborda_points(&improvements);
        for (c, p) in column.iter().zip(pts) {
            points.push(PointRecord {
                dataset: dataset.clone(),
                k: *k,
                classifier: *classifier,
                rule: c.rule,
                mean_improvement: c.mean_improvement,
                points: p,
            });
        }
    }

    let mut totals = Vec::new();
    let mut rules: Vec<RuleKind> = Vec::new();
    for p in &points {
        if !rules.contains(&p.rule) {
            rules.push(p.rule);
        }
    }
    for rule in rules {
        let vals: Vec<f64> = points
            .iter()
            .filter(|p| p.rule == rule)
            .map(|p| p.points as f64)
            .collect();
        let sum: u32 = vals.iter().sum::<f64>() as u32;
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>()
            / (vals.len().saturating_sub(1).max(1)) as f64;
        totals.push(RuleTotal {
            rule,
            sum,
            mean,
            stdev: var.sqrt(),
        });
    }
    totals.sort_by(|a, b| b.sum.cmp(&a.sum).then(a.rule.display_name().cmp(b.rule.display_name())));

    Ok(RankingTable {
        cells: cells.to_vec(),
        points,
        totals,
    })
}

/// Gaussian-assumption Bhattacharyya distance between the two
/// class-conditional distributions, with regularized covariances.
pub fn bhattacharyya_distance(data: &Dataset) -> Result<f64> {
    if !data.has_both_classes() {
        return Err(FusionError::SingleClass);
    }
    let dim = data.dimension();
    let split = |target: ClassLabel| -> Vec<Vec<f64>> {
        data.samples
            .iter()
            .zip(&data.labels)
            .filter(|(_, &l)| l == target)
            .map(|(s, _)| s.features.clone())
            .collect()
    };
    let rows1 = split(ClassLabel::Omega1);
    let rows2 = split(ClassLabel::Omega2);

    let mean = |rows: &[Vec<f64>]| -> nalgebra::DVector<f64> {
        let mut m = nalgebra::DVector::zeros(dim);
        for r in rows {
            for (i, v) in r.iter().enumerate() {
                m[i] += v;
            }
        }
        m / rows.len() as f64
    };
    let regularize = |mut cov: nalgebra::DMatrix<f64>| -> nalgebra::DMatrix<f64> {
        let lambda = (1e-6 * cov.trace() / dim as f64).max(1e-12);
        for i in 0..dim {
            cov[(i, i)] += lambda;
        }
        cov
    };

    let m1 = mean(&rows1);
    let m2 = mean(&rows2);
    let c1 = regularize(crate::classifiers::wknn::covariance(&rows1));
    let c2 = regularize(crate::classifiers::wknn::covariance(&rows2));
    let pooled = (&c1 + &c2) * 0.5;

    let dm = &m2 - &m1;
    let pooled_inv = pooled
        .clone()
        .try_inverse()
        .ok_or_else(|| FusionError::InvalidPlan("singular pooled covariance".into()))?;
    let mahal = (dm.transpose() * pooled_inv * &dm)[(0, 0)];

    let ld_pooled = pooled.determinant().ln();
    let ld1 = c1.determinant().ln();
    let ld2 = c2.determinant().ln();
    Ok(0.125 * mahal + 0.5 * (ld_pooled - 0.5 * (ld1 + ld2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{WeightingKind, WknnParams};
    use crate::data::generators::{generate_dataset, GeneratorKind};
    use crate::types::Sample;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn wknn_plan(name: &str, rules: Vec<RuleKind>) -> ExperimentPlan {
        ExperimentPlan {
            dataset_name: name.to_string(),
            train_size: 400,
            test_size: 1000,
            validation_fraction: 0.3,
            k_splits: vec![5],
            classifier_kind: ClassifierKind::Wknn,
            classifier_params: ClassifierParams::Wknn(WknnParams {
                k: 17,
                weighting: WeightingKind::Linear,
                ..WknnParams::default()
            }),
            rules,
            n_realizations: 2,
            rng_seed: 99,
        }
    }

    #[test]
    fn accuracy_cases() {
        use ClassLabel::{Omega1, Omega2};
        let t = vec![Omega1, Omega2, Omega1, Omega2];
        assert_abs_diff_eq!(accuracy(&t, &t).unwrap(), 100.0);
        let complement: Vec<ClassLabel> = t.iter().map(|l| l.other()).collect();
        assert_abs_diff_eq!(accuracy(&complement, &t).unwrap(), 0.0);
        let three = vec![Omega1, Omega2, Omega1, Omega1];
        assert_abs_diff_eq!(accuracy(&three, &t).unwrap(), 75.0);
        assert!(accuracy(&t[..3], &t).is_err());
    }

    #[test]
    fn split_sizes_and_determinism() {
        let data = generate_dataset(GeneratorKind::Twonorm, 2000, 5).unwrap();
        let mut plan = wknn_plan("twonorm", vec![RuleKind::SimpleMajority]);
        plan.test_size = 1500;
        let (tr, va, te) = split_realization(&data, &plan, 0).unwrap();
        assert_eq!(tr.len(), 280);
        assert_eq!(va.len(), 120);
        assert_eq!(te.len(), 1500);
        let (tr2, va2, te2) = split_realization(&data, &plan, 0).unwrap();
        assert_eq!(tr.samples, tr2.samples);
        assert_eq!(va.samples, va2.samples);
        assert_eq!(te.samples, te2.samples);
        let (tr3, _, _) = split_realization(&data, &plan, 1).unwrap();
        assert_ne!(tr.samples, tr3.samples);
    }

    #[test]
    fn split_partitions_indices_exactly() {
        let data = generate_dataset(GeneratorKind::Twonorm, 500, 6).unwrap();
        let mut plan = wknn_plan("twonorm", vec![RuleKind::SimpleMajority]);
        plan.train_size = 300;
        plan.test_size = 200;
        let (tr, va, te) = split_realization(&data, &plan, 3).unwrap();
        assert_eq!(tr.len() + va.len() + te.len(), 500);
        // no sample duplicated or dropped: multiset equality via sorting
        let mut all: Vec<Vec<u64>> = tr
            .samples
            .iter()
            .chain(&va.samples)
            .chain(&te.samples)
            .map(|s| s.features.iter().map(|f| f.to_bits()).collect())
            .collect();
        let mut expected: Vec<Vec<u64>> = data
            .samples
            .iter()
            .map(|s| s.features.iter().map(|f| f.to_bits()).collect())
            .collect();
        all.sort();
        expected.sort();
        assert_eq!(all, expected);
    }

    #[test]
    fn zero_validation_fraction_rejected() {
        let data = generate_dataset(GeneratorKind::Twonorm, 500, 6).unwrap();
        let mut plan = wknn_plan("twonorm", vec![RuleKind::SimpleMajority]);
        plan.validation_fraction = 0.0;
        assert!(split_realization(&data, &plan, 0).is_err());
    }

    #[test]
    fn identical_members_give_zero_improvement() {
        // hand-built outputs: every rule fuses identical columns to the
        // common vote, so improvement over the member mean is exactly 0
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 200;
        let mut soft = Vec::with_capacity(n);
        let mut truth = Vec::with_capacity(n);
        for _ in 0..n {
            let s: f64 = rng.random();
            soft.push(vec![s; 5]);
            truth.push(if rng.random::<f64>() < s {
                ClassLabel::Omega2
            } else {
                ClassLabel::Omega1
            });
        }
        let out = crate::types::ClassifierOutputs::from_soft(soft).unwrap();
        let fit = fit_ensemble(&out.soft, &out.hard, &truth).unwrap();
        for rule in RuleKind::ALL {
            let mut fused = Vec::new();
            for (s, h) in out.soft.iter().zip(&out.hard) {
                fused.push(decide(rule, &fit, s, h).unwrap().decision);
            }
            let member: Vec<ClassLabel> = out.hard.iter().map(|r| r[0]).collect();
            assert_eq!(fused, member, "rule {rule:?} diverged on identical members");
        }
    }

    #[test]
    fn run_cell_single_rule_and_bookkeeping() {
        let data = generate_dataset(GeneratorKind::Twonorm, 1500, 7).unwrap();
        let plan = wknn_plan("twonorm", vec![RuleKind::SimpleMajority]);
        let run = run_cell(&data, &plan, 5).unwrap();
        assert_eq!(run.cells.len(), 1);
        let c = &run.cells[0];
        assert_abs_diff_eq!(
            c.mean_ensemble_accuracy,
            c.member_mean_accuracy + c.mean_improvement,
            epsilon = 1e-12
        );
        assert!(c.member_max_accuracy >= c.member_mean_accuracy);
        assert_eq!(run.archive.feature_groups.len(), 5);
    }

    #[test]
    fn run_cell_reproducible() {
        let data = generate_dataset(GeneratorKind::Twonorm, 1500, 8).unwrap();
        let plan = wknn_plan("twonorm", vec![RuleKind::WmrAdaptive, RuleKind::Maximum]);
        let a = run_cell(&data, &plan, 5).unwrap();
        let b = run_cell(&data, &plan, 5).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            assert_eq!(x.mean_improvement.to_bits(), y.mean_improvement.to_bits());
        }
    }

    #[test]
    fn wborda_distinct_column() {
        let pts = wborda_points(&[16.96, 20.25, 17.27, 21.62, 15.58, 13.62, 12.57, 18.68]);
        assert_eq!(pts, vec![6, 9, 7, 10, 5, 4, 3, 8]);
    }

    #[test]
    fn wborda_top_tie_shares_ten() {
        let pts = wborda_points(&[5.0, 5.0, 3.0]);
        assert_eq!(pts, vec![10, 10, 9]);
    }

    #[test]
    fn wborda_three_way_tie_continues_dense() {
        // mirrors a column with a genuine three-way tie below the top
        let pts = wborda_points(&[14.25, 14.17, 14.17, 14.17, 13.51, 9.23, 8.34, 0.52]);
        assert_eq!(pts, vec![10, 9, 9, 9, 8, 7, 6, 5]);
    }

    #[test]
    fn condorcet_majority_improves_with_committee_size() {
        // independent members at p = 0.6: simple-majority accuracy is
        // non-decreasing in K within Monte Carlo noise
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let trials = 100_000;
        let mut prev = 0.0;
        for k in [1usize, 3, 5, 7, 9, 11, 13, 15] {
            let mut correct = 0usize;
            for _ in 0..trials {
                let votes: Vec<ClassLabel> = (0..k)
                    .map(|_| {
                        if rng.random::<f64>() < 0.6 {
                            ClassLabel::Omega2
                        } else {
                            ClassLabel::Omega1
                        }
                    })
                    .collect();
                if combine_simple_majority(&votes).unwrap().decision == ClassLabel::Omega2 {
                    correct += 1;
                }
            }
            let acc = correct as f64 / trials as f64;
            // 3 sigma of the binomial difference
            assert!(acc > prev - 0.005, "K={k}: {acc} < {prev}");
            prev = acc;
        }
        assert!(prev > 0.75, "K=15 accuracy {prev}");
    }

    #[test]
    fn bhattacharyya_identical_distributions_near_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let normal = Normal::new(0.0, 1.0).unwrap();
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        for i in 0..2000 {
            samples.push(Sample::new(vec![normal.sample(&mut rng), normal.sample(&mut rng)]));
            labels.push(if i % 2 == 0 { ClassLabel::Omega1 } else { ClassLabel::Omega2 });
        }
        let d = Dataset::new("same", samples, labels).unwrap();
        let b = bhattacharyya_distance(&d).unwrap();
        assert!(b < 0.01, "distance {b}");
    }

    #[test]
    fn bhattacharyya_unit_gaussians_two_apart() {
        // N(0,1) vs N(2,1): (1/8) * 4 = 0.5 analytically
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let n0 = Normal::new(0.0, 1.0).unwrap();
        let n2 = Normal::new(2.0, 1.0).unwrap();
        let mut samples = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..2000 {
            samples.push(Sample::new(vec![n0.sample(&mut rng)]));
            labels.push(ClassLabel::Omega1);
            samples.push(Sample::new(vec![n2.sample(&mut rng)]));
            labels.push(ClassLabel::Omega2);
        }
        let d = Dataset::new("gap", samples, labels).unwrap();
        let b = bhattacharyya_distance(&d).unwrap();
        assert!((b - 0.5).abs() < 0.1, "distance {b}");
    }

    #[test]
    fn bhattacharyya_scale_invariant() {
        let data = generate_dataset(GeneratorKind::Twonorm, 2000, 46).unwrap();
        let b1 = bhattacharyya_distance(&data).unwrap();
        let scaled = Dataset::new(
            "scaled",
            data.samples
                .iter()
                .map(|s| Sample::new(s.features.iter().map(|v| v * 7.5).collect()))
                .collect(),
            data.labels.clone(),
        )
        .unwrap();
        let b2 = bhattacharyya_distance(&scaled).unwrap();
        assert_abs_diff_eq!(b1, b2, epsilon = 1e-6);
    }
}
