//! Multi-level greedy modularity maximisation (Louvain).
//!
//! Each level runs local moves until no single-node move improves modularity, then folds
//! every community into one node and repeats on the coarser graph. Node visit order is a
//! seeded shuffle per sweep, so runs are reproducible for a fixed seed.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::community::Partition;
use super::modularity::{modularity_with_resolution, WeightedGraph};
use super::FollowerGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    pub seed: u64,
    pub resolution: f64,
    /// Upper bound on aggregation levels.
    pub max_levels: usize,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        LouvainConfig {
            seed: 0,
            resolution: 1.0,
            max_levels: 64,
        }
    }
}

impl LouvainConfig {
    pub fn with_seed(seed: u64) -> Self {
        LouvainConfig {
            seed,
            ..Self::default()
        }
    }
}

/// Louvain over every node of `graph`. Degree-zero nodes stay singletons.
///
/// A graph without edges yields the all-singletons partition with modularity 0.
pub fn louvain<T: Scalar>(graph: &FollowerGraph, config: &LouvainConfig) -> Result<Partition<T>> {
    if graph.node_count() == 0 {
        return Err(Error::Graph("louvain needs a non-empty graph".into()));
    }
    let n = graph.node_count();
    if graph.edge_count() == 0 {
        return Ok(Partition {
            nodes: graph.nodes().to_vec(),
            assignment: (0..n).collect(),
            modularity: T::zero(),
            seed: config.seed,
            levels: vec![T::zero()],
        });
    }

    let gamma = T::of(config.resolution);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut wg = WeightedGraph::<T>::from_follower(graph);
    let mut membership: Vec<usize> = (0..n).collect();
    let base = WeightedGraph::<T>::from_follower(graph);
    let mut levels = vec![base.modularity(&membership, gamma)];

    for _ in 0..config.max_levels {
        let (comm, moved) = local_moves(&wg, gamma, &mut rng);
        if !moved {
            break;
        }
        let (comm, n_comms) = compact(&comm);
        for m in membership.iter_mut() {
            *m = comm[*m];
        }
        let q = base.modularity(&membership, gamma);
        levels.push(q);
        if n_comms == wg.len() {
            break;
        }
        wg = wg.aggregate(&comm, n_comms);
    }

    let (assignment, _) = compact(&membership);
    let modularity = modularity_with_resolution(graph, &assignment, gamma)?;
    Ok(Partition {
        nodes: graph.nodes().to_vec(),
        assignment,
        modularity,
        seed: config.seed,
        levels,
    })
}

/// Louvain on the non-isolated part of `graph`. Isolated nodes are left out of the
/// partition so that [`super::assign_communities`] can place isolated seeds together.
pub fn detect_communities<T: Scalar>(graph: &FollowerGraph, config: &LouvainConfig) -> Result<Partition<T>> {
    let connected = graph.without_isolated();
    if connected.node_count() == 0 {
        return Ok(Partition {
            nodes: Vec::new(),
            assignment: Vec::new(),
            modularity: T::zero(),
            seed: config.seed,
            levels: Vec::new(),
        });
    }
    louvain(&connected, config)
}

/// One level of local moves starting from singletons. Returns the community of every
/// node and whether any node changed community.
fn local_moves<T: Scalar>(wg: &WeightedGraph<T>, gamma: T, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
    let n = wg.len();
    let m2 = wg.total;
    let mut comm: Vec<usize> = (0..n).collect();
    let mut tot: Vec<T> = wg.degree.clone();
    let mut link = vec![T::zero(); n];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut any_move = false;

    loop {
        order.shuffle(rng);
        let mut moved = false;
        for &i in &order {
            let ki = wg.degree[i];
            if ki == T::zero() {
                continue;
            }
            let ci = comm[i];
            for &(j, w) in &wg.adj[i] {
                let cj = comm[j];
                if !is_touched[cj] {
                    is_touched[cj] = true;
                    touched.push(cj);
                }
                link[cj] += w;
            }
            tot[ci] -= ki;

            let gain = |c: usize, link: &[T]| link[c] - gamma * tot[c] * ki / m2;
            let tol = T::epsilon() * T::of(64.0) * (ki + T::one());
            let mut best = ci;
            let mut best_gain = gain(ci, &link);
            touched.sort_unstable();
            for &c in &touched {
                if c == ci {
                    continue;
                }
                let g = gain(c, &link);
                if g > best_gain + tol {
                    best = c;
                    best_gain = g;
                }
            }

            tot[best] += ki;
            if best != ci {
                comm[i] = best;
                moved = true;
                any_move = true;
            }
            for &c in &touched {
                link[c] = T::zero();
                is_touched[c] = false;
            }
            touched.clear();
        }
        if !moved {
            break;
        }
    }
    (comm, any_move)
}

/// Renumbers labels to `0..k` in order of first appearance.
fn compact(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|&c| {
            let next = map.len();
            *map.entry(c).or_insert(next)
        })
        .collect();
    (out, map.len())
}
