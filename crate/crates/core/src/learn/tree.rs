//! CART classification tree on Gini impurity.
//!
//! Candidate thresholds are midpoints between consecutive distinct values of a feature
//! within a node. Rows are sparse, so each node gathers only the non-zero entries of its
//! samples and treats the implicit zeros of a feature as one block.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Dataset, TreeParams};
use crate::features::FeatureVector;
use crate::label::{argmax_label, StanceLabel};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub enum Node<T> {
    Leaf {
        label: StanceLabel,
        counts: [usize; 3],
    },
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: T,
        left: usize,
        right: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DecisionTree<T> {
    pub nodes: Vec<Node<T>>,
    pub dim: usize,
}

fn gini(counts: &[usize; 3], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

fn tally<T>(data: &Dataset<T>, samples: &[usize]) -> [usize; 3] {
    let mut c = [0usize; 3];
    for &i in samples {
        c[data.labels[i].index()] += 1;
    }
    c
}

struct Candidate<T> {
    feature: usize,
    threshold: T,
    impurity: f64,
}

impl<T: Scalar> DecisionTree<T> {
    /// Grows a tree on `samples` (indices into `data`, repeats allowed for bootstrap).
    ///
    /// `max_features` below `dim` makes every node examine a random feature subset drawn
    /// from `seed`; otherwise features are scanned in index order and the tree is
    /// independent of the seed.
    pub fn fit(data: &Dataset<T>, samples: Vec<usize>, params: &TreeParams, max_features: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tree = DecisionTree {
            nodes: Vec::new(),
            dim: data.dim,
        };
        // (node slot, samples, depth)
        let mut stack = vec![(0usize, samples, 0usize)];
        tree.nodes.push(Node::Leaf {
            label: StanceLabel::Leave,
            counts: [0; 3],
        });
        let mut buckets: Vec<Vec<(T, StanceLabel)>> = vec![Vec::new(); data.dim];
        while let Some((slot, samples, depth)) = stack.pop() {
            let counts = tally(data, &samples);
            let n = samples.len();
            let leaf = Node::Leaf {
                label: argmax_label(&counts),
                counts,
            };
            let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
            let depth_capped = params.max_depth.is_some_and(|m| depth >= m);
            if pure || n < params.min_samples_split || depth_capped {
                tree.nodes[slot] = leaf;
                continue;
            }
            let Some(best) = best_split(data, &samples, &counts, max_features, &mut rng, &mut buckets) else {
                tree.nodes[slot] = leaf;
                continue;
            };
            let (left, right): (Vec<usize>, Vec<usize>) = samples
                .iter()
                .partition(|&&i| data.rows[i].get(best.feature) <= best.threshold);
            let l = tree.nodes.len();
            tree.nodes.push(leaf.clone());
            tree.nodes.push(leaf);
            tree.nodes[slot] = Node::Split {
                feature: best.feature,
                threshold: best.threshold,
                left: l,
                right: l + 1,
            };
            stack.push((l + 1, right, depth + 1));
            stack.push((l, left, depth + 1));
        }
        tree
    }

    pub fn predict(&self, x: &FeatureVector<T>) -> StanceLabel {
        self.leaf(x).0
    }

    /// Label and training class counts of the leaf reached by `x`.
    pub fn leaf(&self, x: &FeatureVector<T>) -> (StanceLabel, [usize; 3]) {
        let mut k = 0;
        loop {
            match &self.nodes[k] {
                Node::Leaf { label, counts } => return (*label, *counts),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    k = if x.get(*feature) <= *threshold { *left } else { *right };
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn depth(&self) -> usize {
        fn walk<T>(nodes: &[Node<T>], k: usize) -> usize {
            match &nodes[k] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

fn best_split<T: Scalar>(
    data: &Dataset<T>,
    samples: &[usize],
    counts: &[usize; 3],
    max_features: usize,
    rng: &mut ChaCha8Rng,
    buckets: &mut [Vec<(T, StanceLabel)>],
) -> Option<Candidate<T>> {
    let mut present: Vec<usize> = Vec::new();
    for &i in samples {
        let label = data.labels[i];
        for (j, v) in data.rows[i].iter() {
            if buckets[j].is_empty() {
                present.push(j);
            }
            buckets[j].push((v, label));
        }
    }
    present.sort_unstable();

    let n = samples.len();
    let mut best: Option<Candidate<T>> = None;
    let mut consider = |f: usize, best: &mut Option<Candidate<T>>| {
        if buckets[f].is_empty() {
            return;
        }
        if let Some(c) = scan_feature(f, &mut buckets[f], counts, n) {
            if best.as_ref().is_none_or(|b| c.impurity < b.impurity) {
                *best = Some(c);
            }
        }
    };

    if max_features >= data.dim {
        for &f in &present {
            consider(f, &mut best);
        }
    } else {
        // keep drawing past max_features until some feature can split the node
        let mut order: Vec<usize> = (0..data.dim).collect();
        order.shuffle(rng);
        for (visited, f) in order.into_iter().enumerate() {
            if visited >= max_features && best.is_some() {
                break;
            }
            consider(f, &mut best);
        }
    }
    for f in present {
        buckets[f].clear();
    }
    best
}

/// Best threshold on one feature given its non-zero `(value, label)` entries in the node.
fn scan_feature<T: Scalar>(
    feature: usize,
    entries: &mut [(T, StanceLabel)],
    counts: &[usize; 3],
    n: usize,
) -> Option<Candidate<T>> {
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut zero_counts = *counts;
    for (_, l) in entries.iter() {
        zero_counts[l.index()] -= 1;
    }
    let n_zero = n - entries.len();

    // distinct values with their class counts, zeros spliced in at their sorted place
    let mut groups: Vec<(T, [usize; 3], usize)> = Vec::new();
    let mut zero_placed = n_zero == 0;
    for &(v, l) in entries.iter() {
        if !zero_placed && v > T::zero() {
            groups.push((T::zero(), zero_counts, n_zero));
            zero_placed = true;
        }
        match groups.last_mut() {
            Some(g) if g.0 == v => {
                g.1[l.index()] += 1;
                g.2 += 1;
            }
            _ => {
                let mut c = [0usize; 3];
                c[l.index()] = 1;
                groups.push((v, c, 1));
            }
        }
    }
    if !zero_placed {
        groups.push((T::zero(), zero_counts, n_zero));
    }
    if groups.len() < 2 {
        return None;
    }

    let mut left = [0usize; 3];
    let mut n_left = 0usize;
    let mut best: Option<Candidate<T>> = None;
    for k in 0..groups.len() - 1 {
        for (l, g) in left.iter_mut().zip(groups[k].1) {
            *l += g;
        }
        n_left += groups[k].2;
        let right = [counts[0] - left[0], counts[1] - left[1], counts[2] - left[2]];
        let n_right = n - n_left;
        let impurity = (n_left as f64 * gini(&left, n_left) + n_right as f64 * gini(&right, n_right)) / n as f64;
        if best.as_ref().is_none_or(|b| impurity < b.impurity) {
            let (a, b) = (groups[k].0, groups[k + 1].0);
            let mut threshold = (a + b) / T::of(2.0);
            if threshold >= b {
                threshold = a;
            }
            best = Some(Candidate {
                feature,
                threshold,
                impurity,
            });
        }
    }
    best
}
