//! Run configuration: defaults, then a JSON config file, then flags and env overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use stance_core::eval::{FeatureSetup, FoldStrategy};
use stance_core::features::BowWeighting;
use stance_core::learn::Algorithm;

/// Fully resolved settings of one run; echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub partition: Option<PathBuf>,
    pub parties: Option<PathBuf>,
    pub politicians: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    /// Directory of `afinn.tsv`, `huliu.tsv`, `liwc.tsv`, `dal.tsv`; bundled lexica when unset.
    pub lexica: Option<PathBuf>,
    pub level: Level,
    pub algorithms: Vec<Algorithm>,
    pub features: FeatureSetup,
    pub k: usize,
    pub seed: u64,
    pub louvain_seed: u64,
    pub min_degree: usize,
    pub single_pass: bool,
    pub strategy: FoldStrategy,
    pub standardize: bool,
    pub bow_weighting: BowWeighting,
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    #[default]
    Triplet,
    Tweet,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            edges: None,
            partition: None,
            parties: None,
            politicians: None,
            gazetteer: None,
            lexica: None,
            level: Level::Triplet,
            algorithms: vec![Algorithm::Svm],
            features: FeatureSetup::Groups(stance_core::features::GroupSet::ALL),
            k: 5,
            seed: 42,
            louvain_seed: 0,
            min_degree: 10,
            single_pass: false,
            strategy: FoldStrategy::Stratified,
            standardize: false,
            bow_weighting: BowWeighting::Binary,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Fills unset resource paths from the corpus directory when it holds the files
    /// written by `synth generate` (`edges.tsv`, `parties.json`, `politicians.json`, `lexica/`).
    pub fn discover_resources(&mut self) {
        let Some(dir) = self.corpus.clone() else { return };
        if !dir.is_dir() {
            return;
        }
        let found = |name: &str| {
            let p = dir.join(name);
            p.exists().then_some(p)
        };
        if self.edges.is_none() && self.partition.is_none() {
            self.edges = found("edges.tsv");
        }
        if self.gazetteer.is_none() && self.parties.is_none() && self.politicians.is_none() {
            self.parties = found("parties.json");
            self.politicians = found("politicians.json");
        }
        if self.lexica.is_none() {
            self.lexica = found("lexica");
        }
    }
}
