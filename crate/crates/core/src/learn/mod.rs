//! Classifiers behind one train/predict contract.
//!
//! Gaussian and multinomial naive Bayes, a one-vs-rest linear SVM, a Gini decision tree,
//! a random forest and the majority-class baseline. Models serialise to JSON with their
//! hyperparameters, seed and the digest of the feature space they were fitted on.

mod baseline;
mod bayes;
mod forest;
mod scale;
mod svm;
mod tree;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use baseline::{char_ngrams, majority_class_baseline, word_ngrams, NgramMode, NgramSpace};
pub use bayes::{GaussianNb, MultinomialNb};
pub use forest::RandomForest;
pub use scale::Standardizer;
pub use svm::{primal_objective, BinarySvm, LinearSvm};
pub use tree::{DecisionTree, Node};

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::label::{argmax_label, StanceLabel};
use crate::scalar::Scalar;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A feature vector with its gold label and provenance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LabeledInstance<T> {
    pub features: FeatureVector<T>,
    pub label: StanceLabel,
    pub user_id: String,
    pub window: usize,
    pub triplet_id: String,
}

/// Training rows of a common dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    pub dim: usize,
    pub rows: Vec<FeatureVector<T>>,
    pub labels: Vec<StanceLabel>,
    /// Columns the optional standardiser may rescale.
    pub continuous: Vec<usize>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(dim: usize, rows: Vec<FeatureVector<T>>, labels: Vec<StanceLabel>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Training(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: r.dim(),
            });
        }
        Ok(Dataset {
            dim,
            rows,
            labels,
            continuous: Vec::new(),
        })
    }

    pub fn from_instances(dim: usize, instances: &[LabeledInstance<T>]) -> Result<Self> {
        Self::new(
            dim,
            instances.iter().map(|i| i.features.clone()).collect(),
            instances.iter().map(|i| i.label).collect(),
        )
    }

    pub fn with_continuous(mut self, columns: Vec<usize>) -> Self {
        self.continuous = columns;
        self
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Labels present, in label order.
    pub fn classes(&self) -> Vec<StanceLabel> {
        let counts = self.label_counts();
        StanceLabel::ALL.into_iter().filter(|l| counts[l.index()] > 0).collect()
    }

    pub fn label_counts(&self) -> [usize; 3] {
        let mut c = [0usize; 3];
        for l in &self.labels {
            c[l.index()] += 1;
        }
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "mc")]
    MajorityClass,
    #[serde(rename = "nb")]
    NaiveBayes,
    #[serde(rename = "svm")]
    Svm,
    #[serde(rename = "dt")]
    DecisionTree,
    #[serde(rename = "rf")]
    RandomForest,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::MajorityClass,
        Algorithm::NaiveBayes,
        Algorithm::Svm,
        Algorithm::DecisionTree,
        Algorithm::RandomForest,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::MajorityClass => "mc",
            Algorithm::NaiveBayes => "nb",
            Algorithm::Svm => "svm",
            Algorithm::DecisionTree => "dt",
            Algorithm::RandomForest => "rf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mc" | "majority" | "majority-class" => Ok(Algorithm::MajorityClass),
            "nb" | "naive-bayes" => Ok(Algorithm::NaiveBayes),
            "svm" => Ok(Algorithm::Svm),
            "dt" | "tree" | "decision-tree" => Ok(Algorithm::DecisionTree),
            "rf" | "forest" | "random-forest" => Ok(Algorithm::RandomForest),
            other => Err(Error::Parse(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NbVariant {
    #[default]
    Gaussian,
    Multinomial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NbParams {
    pub variant: NbVariant,
    pub var_smoothing: f64,
    pub alpha: f64,
}

impl Default for NbParams {
    fn default() -> Self {
        NbParams {
            variant: NbVariant::Gaussian,
            var_smoothing: 1e-9,
            alpha: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SvmParams {
    pub c: f64,
    pub tol: f64,
    pub max_epochs: usize,
    /// Constant appended to every row; its weight acts as a regularised intercept.
    pub bias: f64,
}

impl Default for SvmParams {
    fn default() -> Self {
        SvmParams {
            c: 1.0,
            tol: 1e-4,
            max_epochs: 1000,
            bias: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_split: 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum MaxFeatures {
    #[default]
    Sqrt,
    All,
    Count(usize),
}

impl MaxFeatures {
    pub fn resolve(self, dim: usize) -> usize {
        let k = match self {
            MaxFeatures::Sqrt => (dim as f64).sqrt().floor() as usize,
            MaxFeatures::All => dim,
            MaxFeatures::Count(k) => k.min(dim),
        };
        k.max(1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub max_features: MaxFeatures,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 10,
            bootstrap: true,
            max_features: MaxFeatures::Sqrt,
            tree: TreeParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct Hyperparams {
    pub nb: NbParams,
    pub svm: SvmParams,
    pub tree: TreeParams,
    pub forest: ForestParams,
    /// Rescale the dataset's continuous columns to zero mean and unit variance.
    pub standardize: bool,
}

/// Per-stream seed derived from a master seed (splitmix64 finaliser).
pub fn derive_seed(master: u64, k: u64) -> u64 {
    let mut z = master ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", tag = "kind", rename_all = "kebab-case")]
pub enum ModelParams<T> {
    MajorityClass { label: StanceLabel, counts: [usize; 3] },
    GaussianNb(GaussianNb<T>),
    MultinomialNb(MultinomialNb<T>),
    Svm(LinearSvm<T>),
    DecisionTree(DecisionTree<T>),
    RandomForest(RandomForest<T>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Model<T> {
    pub format_version: u32,
    pub algorithm: Algorithm,
    pub hyperparams: Hyperparams,
    pub seed: u64,
    pub dim: usize,
    /// Digest of the feature space the model was fitted on, when known.
    pub space_digest: Option<String>,
    pub standardizer: Option<Standardizer<T>>,
    pub params: ModelParams<T>,
}

/// Fits `algorithm` on `data`.
///
/// Every algorithm except the majority-class baseline needs at least two distinct labels.
pub fn train<T: Scalar>(
    algorithm: Algorithm,
    data: &Dataset<T>,
    hyperparams: &Hyperparams,
    seed: u64,
) -> Result<Model<T>> {
    if data.is_empty() {
        return Err(Error::Training("empty training set".into()));
    }
    if algorithm != Algorithm::MajorityClass && data.classes().len() < 2 {
        return Err(Error::Training(format!(
            "{algorithm} needs at least two distinct labels"
        )));
    }
    let standardizer =
        (hyperparams.standardize && !data.continuous.is_empty()).then(|| Standardizer::fit(data, &data.continuous));
    let scaled;
    let data = match &standardizer {
        Some(s) => {
            scaled = Dataset {
                dim: data.dim,
                rows: data.rows.iter().map(|r| s.apply(r)).collect(),
                labels: data.labels.clone(),
                continuous: data.continuous.clone(),
            };
            &scaled
        }
        None => data,
    };
    let params = match algorithm {
        Algorithm::MajorityClass => {
            let counts = data.label_counts();
            ModelParams::MajorityClass {
                label: argmax_label(&counts),
                counts,
            }
        }
        Algorithm::NaiveBayes => match hyperparams.nb.variant {
            NbVariant::Gaussian => ModelParams::GaussianNb(GaussianNb::fit(data, hyperparams.nb.var_smoothing)?),
            NbVariant::Multinomial => ModelParams::MultinomialNb(MultinomialNb::fit(data, hyperparams.nb.alpha)?),
        },
        Algorithm::Svm => ModelParams::Svm(LinearSvm::fit(data, &hyperparams.svm, seed)),
        Algorithm::DecisionTree => {
            let all = (0..data.len()).collect();
            ModelParams::DecisionTree(DecisionTree::fit(data, all, &hyperparams.tree, data.dim, seed))
        }
        Algorithm::RandomForest => ModelParams::RandomForest(RandomForest::fit(data, &hyperparams.forest, seed)),
    };
    Ok(Model {
        format_version: MODEL_FORMAT_VERSION,
        algorithm,
        hyperparams: hyperparams.clone(),
        seed,
        dim: data.dim,
        space_digest: None,
        standardizer,
        params,
    })
}

fn argmax_over<T: Scalar>(classes: &[StanceLabel], scores: &[T]) -> StanceLabel {
    let mut best = 0;
    for k in 1..scores.len() {
        if scores[k] > scores[best] {
            best = k;
        }
    }
    classes[best]
}

impl<T: Scalar> Model<T> {
    pub fn with_space_digest(mut self, digest: impl Into<String>) -> Self {
        self.space_digest = Some(digest.into());
        self
    }

    /// Predicted label; score ties go to the earlier label (Leave, Remain, None).
    pub fn predict(&self, x: &FeatureVector<T>) -> Result<StanceLabel> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.dim(),
            });
        }
        let scaled;
        let x = match &self.standardizer {
            Some(s) => {
                scaled = s.apply(x);
                &scaled
            }
            None => x,
        };
        Ok(match &self.params {
            ModelParams::MajorityClass { label, .. } => *label,
            ModelParams::GaussianNb(m) => argmax_over(&m.classes, &m.joint_log_likelihood(x)),
            ModelParams::MultinomialNb(m) => argmax_over(&m.classes, &m.joint_log_likelihood(x)),
            ModelParams::Svm(m) => argmax_over(&m.classes, &m.scores(x)),
            ModelParams::DecisionTree(m) => m.predict(x),
            ModelParams::RandomForest(m) => m.predict(x),
        })
    }

    pub fn predict_all(&self, rows: &[FeatureVector<T>]) -> Result<Vec<StanceLabel>> {
        rows.iter().map(|x| self.predict(x)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Model<T> = serde_json::from_str(text)?;
        if m.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Training(format!(
                "unsupported model format version {}",
                m.format_version
            )));
        }
        Ok(m)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}
