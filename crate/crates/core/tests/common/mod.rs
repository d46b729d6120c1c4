//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use stance_core::graph::FollowerGraph;

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> FollowerGraph {
    let mut g = FollowerGraph::new();
    for i in 0..n {
        g.add_node(&format!("n{i}"));
    }
    for &(a, b) in edges {
        g.add_edge(&format!("n{a}"), &format!("n{b}"));
    }
    g
}

/// Newman–Girvan modularity straight from its definition,
/// `Q = 1/2m Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j)`.
pub fn direct_modularity(n: usize, edges: &[(usize, usize)], assignment: &[usize]) -> f64 {
    let mut a = vec![vec![0.0f64; n]; n];
    for &(u, v) in edges {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    let k: Vec<f64> = a.iter().map(|r| r.iter().sum()).collect();
    let m2: f64 = k.iter().sum();
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if assignment[i] == assignment[j] {
                q += a[i][j] - k[i] * k[j] / m2;
            }
        }
    }
    q / m2
}

/// Maximum modularity over every set partition of `0..n` (restricted growth strings).
pub fn exhaustive_max_modularity(n: usize, edges: &[(usize, usize)]) -> (f64, Vec<usize>) {
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut rgs = vec![0usize; n];
    loop {
        let q = direct_modularity(n, edges, &rgs);
        if q > best.0 {
            best = (q, rgs.clone());
        }
        // next restricted growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return best;
            }
            i -= 1;
            let max_prev = *rgs[..i].iter().max().unwrap();
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// Erdős–Rényi graph with at least one edge.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Vec<(usize, usize)> {
    loop {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(p) {
                    edges.push((i, j));
                }
            }
        }
        if !edges.is_empty() {
            return edges;
        }
    }
}

/// Community of node `n{i}` for each `i`, read from a partition over node names.
pub fn assignment_by_index(partition: &stance_core::graph::Partition<f64>, n: usize) -> Vec<usize> {
    let map = partition.to_map();
    (0..n).map(|i| map[&format!("n{i}")]).collect()
}

/// Zachary's karate club, 34 members and 78 ties.
pub fn karate_edges() -> Vec<(usize, usize)> {
    let adj: [(usize, &[usize]); 26] = [
        (0, &[1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 17, 19, 21, 31]),
        (1, &[2, 3, 7, 13, 17, 19, 21, 30]),
        (2, &[3, 7, 8, 9, 13, 27, 28, 32]),
        (3, &[7, 12, 13]),
        (4, &[6, 10]),
        (5, &[6, 10, 16]),
        (6, &[16]),
        (8, &[30, 32, 33]),
        (9, &[33]),
        (13, &[33]),
        (14, &[32, 33]),
        (15, &[32, 33]),
        (18, &[32, 33]),
        (19, &[33]),
        (20, &[32, 33]),
        (22, &[32, 33]),
        (23, &[25, 27, 29, 32, 33]),
        (24, &[25, 27, 31]),
        (25, &[31]),
        (26, &[29, 33]),
        (27, &[33]),
        (28, &[31, 33]),
        (29, &[32, 33]),
        (30, &[32, 33]),
        (31, &[32, 33]),
        (32, &[33]),
    ];
    adj.iter()
        .flat_map(|&(u, vs)| vs.iter().map(move |&v| (u, v)))
        .collect()
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let choose2 = |x: f64| x * (x - 1.0) / 2.0;
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0.0f64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let index: f64 = table.iter().flatten().map(|&c| choose2(c)).sum();
    let rows: f64 = table.iter().map(|r| choose2(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| choose2(table.iter().map(|r| r[j]).sum())).sum();
    let total = choose2(a.len() as f64);
    let expected = rows * cols / total;
    let max = (rows + cols) / 2.0;
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}
