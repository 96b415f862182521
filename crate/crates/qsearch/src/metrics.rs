//! Classical network observables: average path length, clustering
//! coefficient, degree statistics, target selection and walk counts.
//!
//! Path lengths use hop counts even on weighted graphs; the normalization of
//! the collapse plots divides by the same hop-based `L` regardless of
//! weights. Downstream records carry this as the `l_metric = "hops"` flag.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::Real;

/// Summary observables of one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub n: usize,
    pub edge_count: usize,
    /// Average shortest-path length in hops over ordered pairs.
    pub l: f64,
    /// Average clustering coefficient.
    pub c: f64,
    pub k_min: usize,
    /// Lower median of the degree sequence.
    pub k_med: usize,
    pub k_max: usize,
    pub k_mean: f64,
}

/// Computes all metrics at once. Fails on disconnected graphs because `L`
/// would be undefined.
pub fn graph_metrics<T: Real>(g: &Graph<T>) -> Result<GraphMetrics> {
    let (k_min, k_med, k_max, k_mean) = degree_stats(g);
    Ok(GraphMetrics {
        n: g.n(),
        edge_count: g.edge_count(),
        l: average_path_length(g)?,
        c: clustering_coefficient(g),
        k_min,
        k_med,
        k_max,
        k_mean,
    })
}

/// Mean hop-count distance over all ordered pairs `i != j`:
/// `L = sum_{i,j} L_ij / (N (N - 1))`. BFS per source, parallel over
/// sources, reduced as an exact integer sum.
pub fn average_path_length<T: Real>(g: &Graph<T>) -> Result<f64> {
    let n = g.n();
    if n < 2 {
        return Err(Error::invalid("graph", "average path length needs n >= 2"));
    }
    let adj: Vec<Vec<u32>> = g
        .adjacency_list()
        .into_iter()
        .map(|row| row.into_iter().map(|(j, _)| j).collect())
        .collect();
    let totals: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|src| {
            let mut dist = vec![u32::MAX; n];
            let mut queue = std::collections::VecDeque::new();
            dist[src] = 0;
            queue.push_back(src as u32);
            let mut sum = 0u64;
            let mut reached = 1usize;
            while let Some(v) = queue.pop_front() {
                let dv = dist[v as usize];
                for &u in &adj[v as usize] {
                    if dist[u as usize] == u32::MAX {
                        dist[u as usize] = dv + 1;
                        sum += (dv + 1) as u64;
                        reached += 1;
                        queue.push_back(u);
                    }
                }
            }
            if reached != n {
                u64::MAX // marks an unreachable pair
            } else {
                sum
            }
        })
        .collect();
    if totals.iter().any(|&t| t == u64::MAX) {
        return Err(Error::Disconnected {
            components: g.component_count(),
        });
    }
    let total: u64 = totals.iter().sum();
    Ok(total as f64 / (n as f64 * (n as f64 - 1.0)))
}

/// Average clustering coefficient `C = mean_i C_i` with
/// `C_i = 2 Delta_i / (k_i (k_i - 1))`; nodes with degree < 2 contribute 0.
/// Weights are ignored: any edge counts as present.
pub fn clustering_coefficient<T: Real>(g: &Graph<T>) -> f64 {
    let n = g.n();
    let adj: Vec<Vec<u32>> = g
        .adjacency_list()
        .into_iter()
        .map(|row| row.into_iter().map(|(j, _)| j).collect())
        .collect();
    let locals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let nb = &adj[i];
            let k = nb.len();
            if k < 2 {
                return 0.0;
            }
            // neighbor lists are sorted; count edges among neighbors by
            // merged intersection
            let mut triangles = 0u64;
            for (a_pos, &a) in nb.iter().enumerate() {
                let rest = &nb[a_pos + 1..];
                let a_nb = &adj[a as usize];
                let (mut x, mut y) = (0usize, 0usize);
                while x < rest.len() && y < a_nb.len() {
                    match rest[x].cmp(&a_nb[y]) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            triangles += 1;
                            x += 1;
                            y += 1;
                        }
                    }
                }
            }
            2.0 * triangles as f64 / (k as f64 * (k as f64 - 1.0))
        })
        .collect();
    locals.iter().sum::<f64>() / n as f64
}

/// `(k_min, k_med, k_max, k_mean)`; `k_med` is the lower median.
pub fn degree_stats<T: Real>(g: &Graph<T>) -> (usize, usize, usize, f64) {
    let mut degs = g.degrees();
    degs.sort_unstable();
    let n = degs.len();
    let k_min = degs[0];
    let k_max = degs[n - 1];
    let k_med = degs[(n - 1) / 2];
    let k_mean = 2.0 * g.edge_count() as f64 / n as f64;
    (k_min, k_med, k_max, k_mean)
}

/// How the search target is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetPolicy {
    /// Smallest node index among minimum-degree nodes.
    Min,
    /// Smallest node index among lower-median-degree nodes.
    Median,
    /// Smallest node index among maximum-degree nodes (the hub).
    Max,
    Explicit(usize),
}

impl std::fmt::Display for TargetPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TargetPolicy::Min => write!(f, "min"),
            TargetPolicy::Median => write!(f, "median"),
            TargetPolicy::Max => write!(f, "max"),
            TargetPolicy::Explicit(i) => write!(f, "{i}"),
        }
    }
}

impl std::str::FromStr for TargetPolicy {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "min" => Ok(TargetPolicy::Min),
            "median" => Ok(TargetPolicy::Median),
            "max" => Ok(TargetPolicy::Max),
            other => other
                .parse::<usize>()
                .map(TargetPolicy::Explicit)
                .map_err(|_| format!("target policy `{other}` is not min|median|max|<index>")),
        }
    }
}

/// Deterministic target selection: among nodes matching the policy degree,
/// the smallest node index wins.
pub fn select_target<T: Real>(g: &Graph<T>, policy: TargetPolicy) -> Result<usize> {
    let degs = g.degrees();
    let wanted = match policy {
        TargetPolicy::Explicit(i) => {
            if i >= g.n() {
                return Err(Error::invalid(
                    "target",
                    format!("explicit index {i} out of range for n = {}", g.n()),
                ));
            }
            return Ok(i);
        }
        TargetPolicy::Min => *degs.iter().min().expect("nonempty"),
        TargetPolicy::Max => *degs.iter().max().expect("nonempty"),
        TargetPolicy::Median => {
            let mut sorted = degs.clone();
            sorted.sort_unstable();
            sorted[(sorted.len() - 1) / 2]
        }
    };
    Ok(degs
        .iter()
        .position(|&d| d == wanted)
        .expect("a node with the policy degree exists"))
}

/// Walk-count tables `f_n(i, j) = <i| A^n |j>` for `0 <= n <= n_max`,
/// computed by `f_{n+1} = A f_n`. Exact integers for unweighted graphs;
/// weighted walk sums otherwise.
pub fn walk_counts<T: Real>(
    g: &Graph<T>,
    n_max: usize,
    mem_cap_bytes: usize,
) -> Result<Vec<Array2<T>>> {
    let n = g.n();
    let required = (n_max + 1)
        .saturating_mul(n)
        .saturating_mul(n)
        .saturating_mul(std::mem::size_of::<T>());
    if required > mem_cap_bytes {
        return Err(Error::MemoryCap {
            required,
            cap: mem_cap_bytes,
        });
    }
    let mut adjacency = Array2::<T>::zeros((n, n));
    for &(i, j, w) in g.edges() {
        adjacency[[i as usize, j as usize]] = w;
        adjacency[[j as usize, i as usize]] = w;
    }
    let mut tables = Vec::with_capacity(n_max + 1);
    tables.push(Array2::<T>::eye(n));
    for _ in 0..n_max {
        let next = adjacency.dot(tables.last().expect("nonempty"));
        tables.push(next);
    }
    Ok(tables)
}

/// Default memory budget for walk tables.
pub const WALK_MEM_CAP: usize = 256 << 20;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen;
    use std::collections::BTreeMap;

    type G = Graph<f64>;

    fn star4() -> G {
        Graph::from_edges(
            5,
            "star",
            BTreeMap::new(),
            None,
            (1..5).map(|i| (0, i, 1.0)),
        )
        .unwrap()
    }

    #[test]
    fn path_length_examples() {
        for n in [2usize, 5, 17] {
            let g: G = netgen::gen_complete(n).unwrap();
            assert_eq!(average_path_length(&g).unwrap(), 1.0);
        }
        let p3: G = Graph::from_edges(
            3,
            "p",
            BTreeMap::new(),
            None,
            [(0, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap();
        assert!((average_path_length(&p3).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        // C8 against brute-force all-pairs distances
        let c8: G = netgen::gen_ring(8, 2).unwrap();
        assert!((average_path_length(&c8).unwrap() - brute_force_l(&c8)).abs() < 1e-15);
        assert!((average_path_length(&c8).unwrap() - 16.0 / 7.0).abs() < 1e-15);
    }

    /// Independent oracle: Floyd-Warshall.
    fn brute_force_l(g: &G) -> f64 {
        let n = g.n();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for i in 0..n {
            d[i][i] = 0;
        }
        for &(i, j, _) in g.edges() {
            d[i as usize][j as usize] = 1;
            d[j as usize][i as usize] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if d[i][k] + d[k][j] < d[i][j] {
                        d[i][j] = d[i][k] + d[k][j];
                    }
                }
            }
        }
        let mut sum = 0usize;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += d[i][j];
                }
            }
        }
        sum as f64 / (n * (n - 1)) as f64
    }

    #[test]
    fn ring_matches_closed_form() {
        // mean ring distance: for even n, (n^2/4)/(n-1) per ordered pair sum
        for n in (4..=100).step_by(12) {
            let g: G = netgen::gen_ring(n, 2).unwrap();
            let l = average_path_length(&g).unwrap();
            let expected = if n % 2 == 0 {
                (n * n / 4) as f64 / (n - 1) as f64
            } else {
                ((n * n - 1) / 4) as f64 / (n - 1) as f64
            };
            assert!((l - expected).abs() < 1e-12, "n = {n}: {l} vs {expected}");
        }
    }

    #[test]
    fn disconnected_rejected() {
        let g: G = Graph::from_edges(
            4,
            "t",
            BTreeMap::new(),
            None,
            [(0, 1, 1.0), (2, 3, 1.0)],
        )
        .unwrap();
        assert!(matches!(
            average_path_length(&g),
            Err(Error::Disconnected { components: 2 })
        ));
    }

    #[test]
    fn clustering_examples() {
        let k4: G = netgen::gen_complete(4).unwrap();
        assert_eq!(clustering_coefficient(&k4), 1.0);
        assert_eq!(clustering_coefficient(&star4()), 0.0);
        // C5 plus one chord (0-2): brute-force triangle counts per node
        let g: G = Graph::from_edges(
            5,
            "t",
            BTreeMap::new(),
            None,
            [
                (0, 1, 1.0),
                (1, 2, 1.0),
                (2, 3, 1.0),
                (3, 4, 1.0),
                (0, 4, 1.0),
                (0, 2, 1.0),
            ],
        )
        .unwrap();
        // triangle {0,1,2}: delta = 1 for nodes 0,1,2; zero for 3,4
        // C_0 = 2*1/(3*2) = 1/3, C_1 = 2*1/(2*1) = 1, C_2 = 1/3
        let expected = (1.0 / 3.0 + 1.0 + 1.0 / 3.0) / 5.0;
        assert!((clustering_coefficient(&g) - expected).abs() < 1e-15);
    }

    #[test]
    fn degree_statistics() {
        let k5: G = netgen::gen_complete(5).unwrap();
        assert_eq!(degree_stats(&k5), (4, 4, 4, 4.0));
        assert_eq!(degree_stats(&star4()), (1, 1, 4, 1.6));
        let sf: G = netgen::gen_static_scale_free(800, 2, 3.0, 5).unwrap();
        let (_, _, _, k_mean) = degree_stats(&sf);
        assert_eq!(k_mean, 4.0);
    }

    #[test]
    fn target_selection() {
        let s = star4();
        assert_eq!(select_target(&s, TargetPolicy::Max).unwrap(), 0);
        assert_eq!(select_target(&s, TargetPolicy::Min).unwrap(), 1);
        let k5: G = netgen::gen_complete(5).unwrap();
        for p in [TargetPolicy::Min, TargetPolicy::Median, TargetPolicy::Max] {
            assert_eq!(select_target(&k5, p).unwrap(), 0);
        }
        assert!(select_target(&k5, TargetPolicy::Explicit(5)).is_err());
        // stability across regenerations
        let a: G = netgen::gen_ws(400, 4, 0.2, 1).unwrap();
        let b: G = netgen::gen_ws(400, 4, 0.2, 1).unwrap();
        assert_eq!(
            select_target(&a, TargetPolicy::Median).unwrap(),
            select_target(&b, TargetPolicy::Median).unwrap()
        );
    }

    #[test]
    fn walk_count_examples() {
        let p3: G = Graph::from_edges(
            3,
            "p",
            BTreeMap::new(),
            None,
            [(0, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap();
        let f = walk_counts(&p3, 2, WALK_MEM_CAP).unwrap();
        assert_eq!(f[0][[0, 0]], 1.0);
        assert_eq!(f[0][[0, 2]], 0.0);
        assert_eq!(f[2][[0, 2]], 1.0);
        assert_eq!(f[2][[0, 0]], 1.0);
        let c4: G = netgen::gen_ring(4, 2).unwrap();
        let f = walk_counts(&c4, 4, WALK_MEM_CAP).unwrap();
        assert_eq!(f[4][[0, 0]], 6.0);
        // f_1 equals the adjacency weights
        for &(i, j, w) in c4.edges() {
            assert_eq!(f[1][[i as usize, j as usize]], w);
        }
    }

    #[test]
    fn walk_count_memory_cap() {
        let g: G = netgen::gen_complete(64).unwrap();
        assert!(matches!(
            walk_counts(&g, 100, 1024),
            Err(Error::MemoryCap { .. })
        ));
    }

    /// Exhaustive DFS walk enumeration, the independent oracle for
    /// `walk_counts`.
    pub(crate) fn enumerate_walks(adj: &[Vec<u32>], from: usize, to: usize, len: usize) -> u64 {
        if len == 0 {
            return (from == to) as u64;
        }
        adj[from]
            .iter()
            .map(|&next| enumerate_walks(adj, next as usize, to, len - 1))
            .sum()
    }

    #[test]
    fn walks_match_enumeration_on_small_graphs() {
        // spot check here; the full 6-node sweep lives in the acceptance suite
        let g: G = netgen::gen_ring(6, 2).unwrap();
        let adj: Vec<Vec<u32>> = g
            .adjacency_list()
            .into_iter()
            .map(|r| r.into_iter().map(|(j, _)| j).collect())
            .collect();
        let f = walk_counts(&g, 4, WALK_MEM_CAP).unwrap();
        for n in 0..=4usize {
            for i in 0..6 {
                for j in 0..6 {
                    assert_eq!(
                        f[n][[i, j]],
                        enumerate_walks(&adj, j, i, n) as f64,
                        "f_{n}({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn shortcut_monotonicity_per_instance() {
        // adding edges never increases any pairwise distance
        let base: G = netgen::gen_ring(40, 2).unwrap();
        let l0 = average_path_length(&base).unwrap();
        for seed in 0..5 {
            let g: G = netgen::gen_ws_shortcut(40, 2, 0.15, seed).unwrap();
            let l = average_path_length(&g).unwrap();
            assert!(l <= l0 + 1e-12, "seed {seed}: {l} > {l0}");
        }
    }
}
