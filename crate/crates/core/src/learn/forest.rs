use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::DecisionTree;
use super::{derive_seed, Dataset, ForestParams};
use crate::features::FeatureVector;
use crate::label::{argmax_label, StanceLabel};
use crate::scalar::Scalar;

/// Bagged Gini trees with random feature subsets; predicts by majority vote.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RandomForest<T> {
    pub trees: Vec<DecisionTree<T>>,
}

impl<T: Scalar> RandomForest<T> {
    /// Trees are grown in parallel; tree `t` draws from its own seed derived from `seed`.
    pub fn fit(data: &Dataset<T>, params: &ForestParams, seed: u64) -> Self {
        let max_features = params.max_features.resolve(data.dim);
        let trees = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let tree_seed = derive_seed(seed, t as u64);
                let n = data.len();
                let samples: Vec<usize> = if params.bootstrap {
                    let mut rng = ChaCha8Rng::seed_from_u64(tree_seed);
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                DecisionTree::fit(data, samples, &params.tree, max_features, derive_seed(tree_seed, 1))
            })
            .collect();
        RandomForest { trees }
    }

    pub fn votes(&self, x: &FeatureVector<T>) -> [usize; 3] {
        let mut votes = [0usize; 3];
        for t in &self.trees {
            votes[t.predict(x).index()] += 1;
        }
        votes
    }

    pub fn predict(&self, x: &FeatureVector<T>) -> StanceLabel {
        argmax_label(&self.votes(x))
    }
}
