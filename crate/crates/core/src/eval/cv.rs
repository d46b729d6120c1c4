use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::dataset::LabeledUnit;
use super::metrics::{f1_per_class, f_avg, ClassScores, ConfusionCounts};
use crate::error::{Error, Result};
use crate::features::{analyze, Analysis, BowWeighting, FeatureContext, FeatureSpace, FeatureVector, GroupSet};
use crate::label::StanceLabel;
use crate::learn::{derive_seed, train, Algorithm, Dataset, Hyperparams, NgramMode, NgramSpace};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FoldStrategy {
    /// Each label's instances are dealt round-robin over the folds.
    #[default]
    Stratified,
    /// All instances of a user land in the same fold.
    UserGrouped,
}

impl fmt::Display for FoldStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FoldStrategy::Stratified => "stratified",
            FoldStrategy::UserGrouped => "user-grouped",
        })
    }
}

impl FromStr for FoldStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stratified" => Ok(FoldStrategy::Stratified),
            "user-grouped" | "user" => Ok(FoldStrategy::UserGrouped),
            other => Err(Error::Parse(format!("unknown fold strategy {other:?}"))),
        }
    }
}

/// Feature groups, or one of the n-gram baselines computed from raw text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeatureSetup {
    Groups(GroupSet),
    Unigrams,
    Ngrams,
}

impl fmt::Display for FeatureSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureSetup::Groups(g) => write!(f, "{g}"),
            FeatureSetup::Unigrams => f.write_str("unigrams"),
            FeatureSetup::Ngrams => f.write_str("ngrams"),
        }
    }
}

impl FromStr for FeatureSetup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "unigrams" => Ok(FeatureSetup::Unigrams),
            "ngrams" => Ok(FeatureSetup::Ngrams),
            other => Ok(FeatureSetup::Groups(other.parse()?)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentSettings {
    pub k: usize,
    pub strategy: FoldStrategy,
    pub seed: u64,
    pub hyperparams: Hyperparams,
    pub bow_weighting: BowWeighting,
}

impl Default for ExperimentSettings {
    fn default() -> Self {
        ExperimentSettings {
            k: 5,
            strategy: FoldStrategy::Stratified,
            seed: 42,
            hyperparams: Hyperparams::default(),
            bow_weighting: BowWeighting::Binary,
        }
    }
}

impl Serialize for FeatureSetup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FeatureSetup {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Instances analysed once, so that every fold and feature subset only re-vectorises.
#[derive(Clone, Debug)]
pub struct Prepared<T> {
    pub instances: Vec<LabeledUnit>,
    pub analyses: Vec<Analysis<T>>,
    pub ctx: FeatureContext<T>,
}

impl<T: Scalar> Prepared<T> {
    pub fn new(instances: Vec<LabeledUnit>, ctx: FeatureContext<T>) -> Result<Self> {
        let analyses = instances
            .par_iter()
            .map(|i| analyze(&i.unit, &ctx))
            .collect::<Result<Vec<_>>>()?;
        Ok(Prepared {
            instances,
            analyses,
            ctx,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn labels(&self) -> Vec<StanceLabel> {
        self.instances.iter().map(|i| i.label).collect()
    }

    /// The instances at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Prepared {
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
            analyses: indices.iter().map(|&i| self.analyses[i].clone()).collect(),
            ctx: self.ctx.clone(),
        }
    }
}

/// Fold index in `0..k` for every instance.
pub fn assign_folds(instances: &[LabeledUnit], k: usize, strategy: FoldStrategy, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::Eval(format!("k = {k}; cross-validation needs k >= 2")));
    }
    if instances.len() < k {
        return Err(Error::Eval(format!(
            "{} instances cannot fill {k} folds",
            instances.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![0usize; instances.len()];
    match strategy {
        FoldStrategy::Stratified => {
            let mut next = 0usize;
            for l in StanceLabel::ALL {
                let mut idx: Vec<usize> = (0..instances.len()).filter(|&i| instances[i].label == l).collect();
                idx.shuffle(&mut rng);
                for i in idx {
                    folds[i] = next % k;
                    next += 1;
                }
            }
        }
        FoldStrategy::UserGrouped => {
            let mut users: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
            for (i, inst) in instances.iter().enumerate() {
                users.entry(inst.unit.user_id.as_str()).or_default().push(i);
            }
            if users.len() < k {
                return Err(Error::Eval(format!("{} users cannot fill {k} folds", users.len())));
            }
            let mut groups: Vec<Vec<usize>> = users.into_values().collect();
            groups.shuffle(&mut rng);
            groups.sort_by_key(|g| std::cmp::Reverse(g.len()));
            let mut sizes = vec![0usize; k];
            for g in groups {
                let f = (0..k).min_by_key(|&f| (sizes[f], f)).unwrap();
                sizes[f] += g.len();
                for i in g {
                    folds[i] = f;
                }
            }
        }
    }
    Ok(folds)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub fold: usize,
    pub n_train: usize,
    pub n_test: usize,
    pub confusion: ConfusionCounts,
    pub f_avg: f64,
}

/// Cross-validated scores. Values are fractions in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub algorithm: Algorithm,
    pub features: FeatureSetup,
    pub strategy: FoldStrategy,
    pub k: usize,
    pub seed: u64,
    pub standardize: bool,
    pub n_instances: usize,
    /// Pooled over the out-of-fold predictions of every fold.
    pub confusion: ConfusionCounts,
    pub classes: [ClassScores; 3],
    pub f_avg: f64,
    pub accuracy: f64,
    pub folds: Vec<FoldReport>,
    pub fold_f_avg_mean: f64,
    pub fold_f_avg_std: f64,
}

impl EvalReport {
    pub fn f1(&self, l: StanceLabel) -> f64 {
        self.classes[l.index()].f1
    }
}

/// Scores out-of-fold predictions given per-instance folds.
pub fn score_predictions(
    gold: &[StanceLabel],
    predicted: &[StanceLabel],
    folds: &[usize],
    k: usize,
) -> (ConfusionCounts, Vec<FoldReport>) {
    let mut per_fold = vec![ConfusionCounts::default(); k];
    for i in 0..gold.len() {
        per_fold[folds[i]].add(gold[i], predicted[i]);
    }
    let mut pooled = ConfusionCounts::default();
    let reports = per_fold
        .into_iter()
        .enumerate()
        .map(|(f, c)| {
            pooled += c;
            FoldReport {
                fold: f,
                n_train: gold.len() - c.total(),
                n_test: c.total(),
                confusion: c,
                f_avg: f_avg(&f1_per_class(&c)),
            }
        })
        .collect();
    (pooled, reports)
}

fn fit_and_predict<T: Scalar>(
    data: &Prepared<T>,
    train_idx: &[usize],
    test_idx: &[usize],
    algorithm: Algorithm,
    setup: FeatureSetup,
    settings: &ExperimentSettings,
    seed: u64,
) -> Result<Vec<StanceLabel>> {
    let (dim, train_rows, test_rows, continuous) = match setup {
        FeatureSetup::Groups(groups) => {
            let space = FeatureSpace::fit(
                train_idx.iter().map(|&i| &data.analyses[i]),
                groups,
                settings.bow_weighting,
                &data.ctx,
            )?;
            let vec = |idx: &[usize]| -> Result<Vec<FeatureVector<T>>> {
                idx.iter().map(|&i| space.vectorize(&data.analyses[i])).collect()
            };
            (space.dim(), vec(train_idx)?, vec(test_idx)?, space.continuous_columns())
        }
        FeatureSetup::Unigrams | FeatureSetup::Ngrams => {
            let mode = if setup == FeatureSetup::Unigrams {
                NgramMode::Unigrams
            } else {
                NgramMode::Ngrams
            };
            let space = NgramSpace::fit(mode, train_idx.iter().map(|&i| data.instances[i].unit.text.as_str()));
            let vec = |idx: &[usize]| -> Vec<FeatureVector<T>> {
                idx.iter()
                    .map(|&i| space.vectorize(&data.instances[i].unit.text))
                    .collect()
            };
            (space.dim(), vec(train_idx), vec(test_idx), Vec::new())
        }
    };
    let labels = train_idx.iter().map(|&i| data.instances[i].label).collect();
    let dataset = Dataset::new(dim, train_rows, labels)?.with_continuous(continuous);
    let model = train(algorithm, &dataset, &settings.hyperparams, seed)?;
    model.predict_all(&test_rows)
}

/// k-fold cross-validation; the feature space is refit on every training split.
pub fn cross_validate<T: Scalar>(
    data: &Prepared<T>,
    algorithm: Algorithm,
    setup: FeatureSetup,
    settings: &ExperimentSettings,
) -> Result<EvalReport> {
    let k = settings.k;
    let folds = assign_folds(&data.instances, k, settings.strategy, settings.seed)?;
    let gold = data.labels();
    let mut predicted = vec![StanceLabel::None; data.len()];
    for f in 0..k {
        let (test_idx, train_idx): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| folds[i] == f);
        let distinct = {
            let mut c = [false; 3];
            for &i in &test_idx {
                c[gold[i].index()] = true;
            }
            c.iter().filter(|&&b| b).count()
        };
        if distinct < 2 {
            log::warn!("fold {f} has test instances of a single label");
        }
        let out = fit_and_predict(
            data,
            &train_idx,
            &test_idx,
            algorithm,
            setup,
            settings,
            derive_seed(settings.seed, 1000 + f as u64),
        )?;
        for (&i, p) in test_idx.iter().zip(out) {
            predicted[i] = p;
        }
    }
    let (confusion, fold_reports) = score_predictions(&gold, &predicted, &folds, k);
    let classes = f1_per_class(&confusion);
    let fs: Vec<f64> = fold_reports.iter().map(|r| r.f_avg).collect();
    let mean = fs.iter().sum::<f64>() / k as f64;
    let std = (fs.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k as f64).sqrt();
    Ok(EvalReport {
        algorithm,
        features: setup,
        strategy: settings.strategy,
        k,
        seed: settings.seed,
        standardize: settings.hyperparams.standardize,
        n_instances: data.len(),
        confusion,
        classes,
        f_avg: f_avg(&classes),
        accuracy: confusion.accuracy(),
        folds: fold_reports,
        fold_f_avg_mean: mean,
        fold_f_avg_std: std,
    })
}
