//! Follower graph construction, degree filtering and Louvain community detection.

mod community;
mod louvain;
mod modularity;

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

pub use community::{
    assign_communities, community_stance_distribution, read_partition, write_partition, CommunityAssignment,
    CommunityStance, Partition, PartitionFile,
};
pub use louvain::{detect_communities, louvain, LouvainConfig};
pub use modularity::{modularity, modularity_with_resolution};

/// Undirected, unweighted social graph over user ids.
///
/// Follow relations are symmetrised: `a` follows `b` and `b` follows `a` are the same tie.
/// Node indices follow first appearance, so iteration order is reproducible.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FollowerGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    adjacency: Vec<BTreeSet<usize>>,
    seeds: BTreeSet<String>,
    edge_count: usize,
    self_loops_dropped: usize,
    duplicates_merged: usize,
}

impl FollowerGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> &[String] {
        &self.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().copied()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Edges as `(u, v)` index pairs with `u < v`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn seed_users(&self) -> &BTreeSet<String> {
        &self.seeds
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_merged(&self) -> usize {
        self.duplicates_merged
    }

    pub fn add_node(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.adjacency.push(BTreeSet::new());
        i
    }

    /// Adds an undirected tie. Self-loops are dropped and counted; repeated ties merge.
    pub fn add_edge(&mut self, a: &str, b: &str) -> bool {
        let u = self.add_node(a);
        if a == b {
            self.self_loops_dropped += 1;
            return false;
        }
        let v = self.add_node(b);
        if self.adjacency[u].insert(v) {
            self.adjacency[v].insert(u);
            self.edge_count += 1;
            true
        } else {
            self.duplicates_merged += 1;
            false
        }
    }

    /// Flags corpus users; users absent from the edge data become isolated nodes.
    pub fn mark_seeds<I, S>(&mut self, users: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for u in users {
            self.add_node(u.as_ref());
            self.seeds.insert(u.as_ref().to_string());
        }
    }

    /// Subgraph induced by the nodes for which `keep` returns true.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> FollowerGraph {
        let mut out = FollowerGraph::new();
        for (i, name) in self.names.iter().enumerate() {
            if keep(i) {
                out.add_node(name);
            }
        }
        for (u, v) in self.edges() {
            if keep(u) && keep(v) {
                out.add_edge(&self.names[u], &self.names[v]);
            }
        }
        out.seeds = self.seeds.iter().filter(|s| out.contains(s)).cloned().collect();
        out
    }

    /// The graph without degree-zero nodes.
    pub fn without_isolated(&self) -> FollowerGraph {
        self.induced(|i| self.degree(i) > 0)
    }
}

/// Builds a graph from `(follower, followed)` records; direction is discarded.
pub fn build_graph<I>(records: I) -> Result<FollowerGraph>
where
    I: IntoIterator<Item = Result<(String, String)>>,
{
    let mut g = FollowerGraph::new();
    for rec in records {
        let (a, b) = rec?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::Graph("empty user id in edge record".into()));
        }
        g.add_edge(&a, &b);
    }
    Ok(g)
}

/// Reads `follower<TAB>followed` lines. Blank lines and `#` comments are skipped.
pub fn read_edges_tsv(path: impl AsRef<Path>) -> Result<FollowerGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let file_name = path.display().to_string();
    let records = BufReader::new(file).lines().enumerate().filter_map(|(i, line)| {
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(Error::io(path, e))),
        };
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            return None;
        }
        let mut parts = trimmed.split('\t');
        Some(match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b), None) if !a.trim().is_empty() && !b.trim().is_empty() => {
                Ok((a.trim().to_string(), b.trim().to_string()))
            }
            _ => Err(Error::Malformed {
                file: file_name.clone(),
                line: i + 1,
                message: "expected `follower<TAB>followed`".into(),
            }),
        })
    });
    build_graph(records)
}

pub fn write_edges_tsv<'a>(
    path: impl AsRef<Path>,
    edges: impl IntoIterator<Item = &'a (String, String)>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for (a, b) in edges {
        writeln!(w, "{a}\t{b}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// Prune repeatedly until every remaining non-seed node meets the threshold.
    #[default]
    Iterative,
    /// One pass over the original degrees.
    SinglePass,
}

/// Removes non-seed nodes with fewer than `min_degree` ties. Nodes in `keep` always survive,
/// possibly isolated.
pub fn filter_graph(
    graph: &FollowerGraph,
    min_degree: usize,
    keep: &BTreeSet<String>,
    mode: FilterMode,
) -> FollowerGraph {
    let n = graph.node_count();
    let protected: Vec<bool> = graph.names.iter().map(|s| keep.contains(s)).collect();
    let mut degree: Vec<usize> = (0..n).map(|i| graph.degree(i)).collect();
    let mut removed = vec![false; n];
    match mode {
        FilterMode::SinglePass => {
            for i in 0..n {
                removed[i] = !protected[i] && degree[i] < min_degree;
            }
        }
        FilterMode::Iterative => {
            let mut stack: Vec<usize> = (0..n).filter(|&i| !protected[i] && degree[i] < min_degree).collect();
            while let Some(i) = stack.pop() {
                if removed[i] {
                    continue;
                }
                removed[i] = true;
                for j in graph.neighbors(i) {
                    if removed[j] {
                        continue;
                    }
                    degree[j] -= 1;
                    if !protected[j] && degree[j] + 1 == min_degree {
                        stack.push(j);
                    }
                }
            }
        }
    }
    graph.induced(|i| !removed[i])
}

/// Seed-aware community detection as run before feature extraction.
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityRun<T> {
    /// The graph left after degree filtering.
    pub filtered: FollowerGraph,
    pub partition: Partition<T>,
    pub assignment: CommunityAssignment,
}

/// Marks `seed_users`, prunes other nodes below `min_degree`, runs Louvain on the
/// non-isolated remainder and maps every seed user to a community.
pub fn communities_for_users<T: crate::scalar::Scalar>(
    graph: &FollowerGraph,
    seed_users: &BTreeSet<String>,
    min_degree: usize,
    mode: FilterMode,
    config: &LouvainConfig,
) -> Result<CommunityRun<T>> {
    let mut graph = graph.clone();
    graph.mark_seeds(seed_users);
    let filtered = filter_graph(&graph, min_degree, seed_users, mode);
    let partition = detect_communities(&filtered, config)?;
    let assignment = assign_communities(&partition, seed_users);
    Ok(CommunityRun {
        filtered,
        partition,
        assignment,
    })
}
