use super::FollowerGraph;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Weighted undirected graph used during Louvain aggregation.
///
/// `loops[i]` is the total weight of edges folded inside node `i`; it counts twice towards
/// the node's degree, as an undirected self-loop does.
#[derive(Clone, Debug)]
pub(crate) struct WeightedGraph<T> {
    pub adj: Vec<Vec<(usize, T)>>,
    pub loops: Vec<T>,
    pub degree: Vec<T>,
    /// Sum of all degrees, i.e. twice the total edge weight.
    pub total: T,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn from_follower(g: &FollowerGraph) -> Self {
        let adj: Vec<Vec<(usize, T)>> = (0..g.node_count())
            .map(|i| g.neighbors(i).map(|j| (j, T::one())).collect())
            .collect();
        Self::from_parts(adj, vec![T::zero(); g.node_count()])
    }

    pub fn from_parts(adj: Vec<Vec<(usize, T)>>, loops: Vec<T>) -> Self {
        let two = T::one() + T::one();
        let degree: Vec<T> = adj
            .iter()
            .zip(&loops)
            .map(|(ns, &l)| ns.iter().map(|&(_, w)| w).sum::<T>() + two * l)
            .collect();
        let total = degree.iter().copied().sum();
        WeightedGraph {
            adj,
            loops,
            degree,
            total,
        }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community into a single node.
    pub fn aggregate(&self, comm: &[usize], n_comms: usize) -> Self {
        let mut loops = vec![T::zero(); n_comms];
        let mut rows: Vec<std::collections::BTreeMap<usize, T>> = vec![Default::default(); n_comms];
        for (i, ns) in self.adj.iter().enumerate() {
            let ci = comm[i];
            loops[ci] += self.loops[i];
            for &(j, w) in ns {
                let cj = comm[j];
                if ci == cj {
                    // each internal edge is seen from both ends
                    if i < j {
                        loops[ci] += w;
                    }
                } else {
                    *rows[ci].entry(cj).or_insert_with(T::zero) += w;
                }
            }
        }
        let adj = rows.into_iter().map(|r| r.into_iter().collect()).collect();
        Self::from_parts(adj, loops)
    }

    /// Newman–Girvan modularity of `comm` with resolution `gamma`.
    pub fn modularity(&self, comm: &[usize], gamma: T) -> T {
        let n_comms = comm.iter().copied().max().map_or(0, |m| m + 1);
        let mut internal = vec![T::zero(); n_comms];
        let mut tot = vec![T::zero(); n_comms];
        let two = T::one() + T::one();
        for (i, ns) in self.adj.iter().enumerate() {
            let c = comm[i];
            tot[c] += self.degree[i];
            internal[c] += two * self.loops[i];
            for &(j, w) in ns {
                if comm[j] == c {
                    internal[c] += w;
                }
            }
        }
        let m2 = self.total;
        internal
            .iter()
            .zip(&tot)
            .map(|(&inn, &t)| inn / m2 - gamma * (t / m2) * (t / m2))
            .sum()
    }
}

/// Modularity `Q = Σ_c [e_c/m − (d_c/2m)²]` of a node→community assignment indexed by
/// node index.
pub fn modularity<T: Scalar>(graph: &FollowerGraph, assignment: &[usize]) -> Result<T> {
    modularity_with_resolution(graph, assignment, T::one())
}

pub fn modularity_with_resolution<T: Scalar>(graph: &FollowerGraph, assignment: &[usize], resolution: T) -> Result<T> {
    if graph.edge_count() == 0 {
        return Err(Error::Graph("modularity is undefined on a graph without edges".into()));
    }
    if assignment.len() != graph.node_count() {
        return Err(Error::Graph(format!(
            "assignment covers {} nodes, graph has {}",
            assignment.len(),
            graph.node_count()
        )));
    }
    // community ids may be sparse; compact them first
    let mut remap = std::collections::HashMap::new();
    let compact: Vec<usize> = assignment
        .iter()
        .map(|&c| {
            let next = remap.len();
            *remap.entry(c).or_insert(next)
        })
        .collect();
    Ok(WeightedGraph::<T>::from_follower(graph).modularity(&compact, resolution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use proptest::prelude::*;

    fn graph(pairs: &[(usize, usize)]) -> FollowerGraph {
        build_graph(pairs.iter().map(|(a, b)| Ok((a.to_string(), b.to_string())))).unwrap()
    }

    fn two_triangles() -> FollowerGraph {
        graph(&[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    }

    #[test]
    fn two_triangles_split_is_one_half() {
        let q: f64 = modularity(&two_triangles(), &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
        let q32: f32 = modularity(&two_triangles(), &[0, 0, 0, 1, 1, 1]).unwrap();
        assert!((q32 - 0.5).abs() < 1e-6);
    }

    #[test]
    fn one_community_is_zero() {
        let g = graph(&[(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)]);
        let q: f64 = modularity(&g, &[7; 4]).unwrap();
        assert!(q.abs() < 1e-12);
    }

    #[test]
    fn single_edge_split_is_minus_half() {
        let q: f64 = modularity(&graph(&[(0, 1)]), &[0, 1]).unwrap();
        assert!((q + 0.5).abs() < 1e-12);
    }

    #[test]
    fn edgeless_graph_is_an_error() {
        let mut g = FollowerGraph::new();
        g.add_node("a");
        assert!(modularity::<f64>(&g, &[0]).is_err());
        assert!(modularity::<f64>(&two_triangles(), &[0, 0]).is_err());
    }

    #[test]
    fn aggregation_preserves_modularity() {
        let g = graph(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 5)]);
        let wg = WeightedGraph::<f64>::from_follower(&g);
        let comm = [0, 0, 0, 1, 1, 1];
        let agg = wg.aggregate(&comm, 2);
        assert_eq!(agg.total, wg.total);
        let q_fine = wg.modularity(&comm, 1.0);
        let q_coarse = agg.modularity(&[0, 1], 1.0);
        assert!((q_fine - q_coarse).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn relabeling_does_not_change_q(
            pairs in proptest::collection::vec((0usize..8, 0usize..8), 1..20),
            labels in proptest::collection::vec(0usize..4, 8),
            shift in 1usize..10,
        ) {
            let g = graph(&pairs);
            prop_assume!(g.edge_count() > 0);
            let n = g.node_count();
            let assign: Vec<usize> = (0..n).map(|i| labels[i]).collect();
            let relabeled: Vec<usize> = assign.iter().map(|c| (3 - c) * 10 + shift).collect();
            let a: f64 = modularity(&g, &assign).unwrap();
            let b: f64 = modularity(&g, &relabeled).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
            prop_assert!((-0.5 - 1e-12..=1.0).contains(&a));
        }
    }
}
