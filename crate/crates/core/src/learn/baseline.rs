use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{train, Algorithm, Dataset, Hyperparams, Model};
use crate::error::Result;
use crate::features::{tokenize, FeatureVector};
use crate::scalar::Scalar;

/// Always predicts the most frequent training label, ties going to the earlier label.
pub fn majority_class_baseline<T: Scalar>(data: &Dataset<T>) -> Result<Model<T>> {
    train(Algorithm::MajorityClass, data, &Hyperparams::default(), 0)
}

/// Contiguous word n-grams of lowercased tokens, for every `n` in `1..=max_n`, joined by
/// single spaces.
pub fn word_ngrams(text: &str, max_n: usize) -> BTreeSet<String> {
    let tokens = tokenize(&text.to_lowercase());
    let mut out = BTreeSet::new();
    for n in 1..=max_n {
        for w in tokens.windows(n) {
            out.insert(w.join(" "));
        }
    }
    out
}

/// Character n-grams of the lowercased raw text (spaces included) for `n` in `min_n..=max_n`.
pub fn char_ngrams(text: &str, min_n: usize, max_n: usize) -> BTreeSet<String> {
    let chars: Vec<char> = text.to_lowercase().chars().collect();
    let mut out = BTreeSet::new();
    for n in min_n.max(1)..=max_n {
        for w in chars.windows(n) {
            out.insert(w.iter().collect());
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NgramMode {
    /// Word unigrams.
    Unigrams,
    /// Word 1–3 grams plus character 2–5 grams.
    Ngrams,
}

/// Binary n-gram presence space fitted on a training split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NgramSpace {
    pub mode: NgramMode,
    vocabulary: BTreeMap<String, usize>,
}

impl NgramSpace {
    fn keys(mode: NgramMode, text: &str) -> Vec<String> {
        match mode {
            NgramMode::Unigrams => word_ngrams(text, 1).into_iter().map(|g| format!("w:{g}")).collect(),
            NgramMode::Ngrams => word_ngrams(text, 3)
                .into_iter()
                .map(|g| format!("w:{g}"))
                .chain(char_ngrams(text, 2, 5).into_iter().map(|g| format!("c:{g}")))
                .collect(),
        }
    }

    pub fn fit<'a>(mode: NgramMode, texts: impl IntoIterator<Item = &'a str>) -> Self {
        let mut keys = BTreeSet::new();
        for t in texts {
            keys.extend(Self::keys(mode, t));
        }
        NgramSpace {
            mode,
            vocabulary: keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vocabulary.len()
    }

    /// Out-of-vocabulary n-grams are dropped.
    pub fn vectorize<T: Scalar>(&self, text: &str) -> FeatureVector<T> {
        let pairs = Self::keys(self.mode, text)
            .into_iter()
            .filter_map(|k| self.vocabulary.get(&k).map(|&i| (i, T::one())));
        FeatureVector::from_pairs(self.dim(), pairs)
    }
}
