use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, LabelCounts};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Community assignment of graph nodes with its modularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Partition<T> {
    pub nodes: Vec<String>,
    /// Community of `nodes[i]`; ids are contiguous from 0.
    pub assignment: Vec<usize>,
    pub modularity: T,
    pub seed: u64,
    /// Modularity of the singleton start and after every aggregation level.
    pub levels: Vec<T>,
}

impl<T: Scalar> Partition<T> {
    pub fn num_communities(&self) -> usize {
        self.assignment.iter().copied().max().map_or(0, |m| m + 1)
    }

    pub fn community_of(&self, node: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == node).map(|i| self.assignment[i])
    }

    pub fn to_map(&self) -> BTreeMap<String, usize> {
        self.nodes
            .iter()
            .cloned()
            .zip(self.assignment.iter().copied())
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_communities()];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }
}

/// Community of every corpus (seed) user, with one extra community collecting the seeds
/// that have no ties left in the filtered graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunityAssignment {
    pub communities: BTreeMap<String, usize>,
    pub isolated_community_id: usize,
    /// Number of community ids in use, the isolated community included when occupied.
    pub n_communities: usize,
}

impl CommunityAssignment {
    pub fn community_of(&self, user: &str) -> Option<usize> {
        self.communities.get(user).copied()
    }

    pub fn isolated_users(&self) -> impl Iterator<Item = &str> + '_ {
        self.communities
            .iter()
            .filter(move |(_, &c)| c == self.isolated_community_id)
            .map(|(u, _)| u.as_str())
    }
}

pub fn assign_communities<T: Scalar>(partition: &Partition<T>, seed_users: &BTreeSet<String>) -> CommunityAssignment {
    let index: HashMap<&str, usize> = partition
        .nodes
        .iter()
        .zip(&partition.assignment)
        .map(|(n, &c)| (n.as_str(), c))
        .collect();
    let isolated = partition.num_communities();
    let mut any_isolated = false;
    let communities = seed_users
        .iter()
        .map(|u| {
            let c = index.get(u.as_str()).copied().unwrap_or_else(|| {
                any_isolated = true;
                isolated
            });
            (u.clone(), c)
        })
        .collect();
    CommunityAssignment {
        communities,
        isolated_community_id: isolated,
        n_communities: isolated + usize::from(any_isolated),
    }
}

/// Pooled gold-label tallies of one community over all its users and windows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CommunityStance {
    pub users: usize,
    pub counts: LabelCounts,
    /// `None` for a community without annotated users.
    pub fractions: Option<[f64; 3]>,
}

pub fn community_stance_distribution(
    assignment: &CommunityAssignment,
    corpus: &Corpus,
) -> BTreeMap<usize, CommunityStance> {
    let mut out: BTreeMap<usize, CommunityStance> = (0..assignment.n_communities)
        .map(|c| (c, CommunityStance::default()))
        .collect();
    let mut users: BTreeMap<usize, BTreeSet<&str>> = BTreeMap::new();
    for t in corpus.gold_triplets() {
        if let Some(c) = assignment.community_of(&t.user_id) {
            let entry = out.entry(c).or_default();
            entry.counts.add(t.gold.expect("gold"));
            users.entry(c).or_default().insert(&t.user_id);
        }
    }
    for (c, entry) in out.iter_mut() {
        entry.users = users.get(c).map_or(0, BTreeSet::len);
        entry.fractions = entry.counts.fractions();
    }
    out
}

/// On-disk form of a detected partition (`partition.json`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionFile {
    pub seed: u64,
    pub modularity: f64,
    pub communities: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isolated_community: Option<usize>,
}

impl PartitionFile {
    pub fn new<T: Scalar>(partition: &Partition<T>, assignment: &CommunityAssignment) -> Self {
        let mut communities = partition.to_map();
        let mut isolated = None;
        for u in assignment.isolated_users() {
            communities.insert(u.to_string(), assignment.isolated_community_id);
            isolated = Some(assignment.isolated_community_id);
        }
        PartitionFile {
            seed: partition.seed,
            modularity: partition.modularity.to_f64_lossy(),
            communities,
            isolated_community: isolated,
        }
    }

    /// Rebuilds the assignment of `seed_users`. Seeds missing from the file join the
    /// isolated community.
    pub fn assignment_for(&self, seed_users: &BTreeSet<String>) -> CommunityAssignment {
        let max_id = self.communities.values().copied().max();
        let isolated = self.isolated_community.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
        let mut n = max_id.map_or(0, |m| m + 1);
        let communities = seed_users
            .iter()
            .map(|u| {
                let c = self.communities.get(u).copied().unwrap_or_else(|| {
                    log::warn!("user `{u}` missing from partition, placed in isolated community");
                    isolated
                });
                n = n.max(c + 1);
                (u.clone(), c)
            })
            .collect();
        CommunityAssignment {
            communities,
            isolated_community_id: isolated,
            n_communities: n,
        }
    }
}

pub fn write_partition(path: impl AsRef<Path>, file: &PartitionFile) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, serde_json::to_string_pretty(file)? + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_partition(path: impl AsRef<Path>) -> Result<PartitionFile> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
