//! Undirected weighted simple graphs with generator provenance.
//!
//! Edges are stored as `(i, j, w)` with `i < j`, sorted lexicographically and
//! deduplicated, so a graph value has exactly one byte representation in the
//! canonical JSON form regardless of construction order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Undirected weighted simple graph. Weight 1 on every edge means
/// "unweighted"; weighted graphs carry weights in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
pub struct Graph<T> {
    n: usize,
    family: String,
    params: BTreeMap<String, String>,
    seed: Option<u64>,
    edges: Vec<(u32, u32, T)>,
}

impl<T: Real> Graph<T> {
    /// Builds a graph from an edge iterator. Endpoints may come in either
    /// order; self-loops and duplicate edges are rejected.
    pub fn from_edges(
        n: usize,
        family: impl Into<String>,
        params: BTreeMap<String, String>,
        seed: Option<u64>,
        edges: impl IntoIterator<Item = (u32, u32, T)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut normalized: Vec<(u32, u32, T)> = Vec::new();
        for (a, b, w) in edges {
            if a == b {
                return Err(Error::invalid("edges", format!("self-loop at node {a}")));
            }
            if (a as usize) >= n || (b as usize) >= n {
                return Err(Error::invalid(
                    "edges",
                    format!("edge ({a}, {b}) out of range for n = {n}"),
                ));
            }
            if !(w > T::zero() && w <= T::one()) {
                return Err(Error::invalid(
                    "edges",
                    format!("weight {w} outside (0, 1] on edge ({a}, {b})"),
                ));
            }
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            normalized.push((i, j, w));
        }
        normalized.sort_unstable_by_key(|&(i, j, _)| (i, j));
        if normalized.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::invalid("edges", "duplicate edge"));
        }
        Ok(Graph {
            n,
            family: family.into(),
            params,
            seed,
            edges: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order: `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(u32, u32, T)] {
        &self.edges
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// True if any edge weight differs from exactly 1.
    pub fn is_weighted(&self) -> bool {
        self.edges.iter().any(|&(_, _, w)| w != T::one())
    }

    /// Canonical one-line description of the generator parameters,
    /// used in error messages and job keys.
    pub fn params_string(&self) -> String {
        params_string(&self.params)
    }

    /// Adjacency lists with weights, neighbor lists sorted by node index.
    pub fn adjacency_list(&self) -> Vec<Vec<(u32, T)>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(i, j, w) in &self.edges {
            adj[i as usize].push((j, w));
            adj[j as usize].push((i, w));
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(j, _)| j);
        }
        adj
    }

    /// Topological degree of every node.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(i, j, _) in &self.edges {
            deg[i as usize] += 1;
            deg[j as usize] += 1;
        }
        deg
    }

    /// Weighted degree `d_i = sum_j A_ij` of every node.
    pub fn weighted_degrees(&self) -> Vec<T> {
        let mut deg = vec![T::zero(); self.n];
        for &(i, j, w) in &self.edges {
            deg[i as usize] = deg[i as usize] + w;
            deg[j as usize] = deg[j as usize] + w;
        }
        deg
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        component_labels(self.n, &self.edges).1
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }

    /// Largest connected component as a new graph with nodes re-indexed
    /// densely, preserving relative node order. Returns the node count of
    /// the original graph that was kept.
    pub fn largest_component(&self) -> (Graph<T>, usize) {
        let (labels, ncomp) = component_labels(self.n, &self.edges);
        if ncomp <= 1 {
            return (self.clone(), self.n);
        }
        let mut sizes = vec![0usize; ncomp];
        for &l in &labels {
            sizes[l] += 1;
        }
        let best = sizes
            .iter()
            .enumerate()
            .max_by_key(|&(i, &s)| (s, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .unwrap();
        let mut remap = vec![u32::MAX; self.n];
        let mut next = 0u32;
        for v in 0..self.n {
            if labels[v] == best {
                remap[v] = next;
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(i, j, _)| labels[i as usize] == best && labels[j as usize] == best)
            .map(|&(i, j, w)| (remap[i as usize], remap[j as usize], w));
        let g = Graph::from_edges(
            next as usize,
            self.family.clone(),
            self.params.clone(),
            self.seed,
            edges,
        )
        .expect("component extraction preserves validity");
        (g, sizes[best])
    }

    /// Relabels nodes by a permutation: node `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[u32]) -> Result<Graph<T>> {
        if perm.len() != self.n {
            return Err(Error::invalid("perm", "length must equal node count"));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if (p as usize) >= self.n || seen[p as usize] {
                return Err(Error::invalid("perm", "not a permutation"));
            }
            seen[p as usize] = true;
        }
        Graph::from_edges(
            self.n,
            self.family.clone(),
            self.params.clone(),
            self.seed,
            self.edges
                .iter()
                .map(|&(i, j, w)| (perm[i as usize], perm[j as usize], w)),
        )
    }

    /// Canonical JSON document: fixed field order, edges sorted, params as a
    /// sorted map. Identical inputs produce identical bytes across runs.
    pub fn to_canonical_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let g: Graph<T> = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "<json>".into(),
            line: e.line(),
            reason: e.to_string(),
        })?;
        // re-validate invariants on the decoded value
        Graph::from_edges(g.n, g.family, g.params, g.seed, g.edges)
    }
}

pub(crate) fn params_string(params: &BTreeMap<String, String>) -> String {
    let mut out = String::new();
    for (k, v) in params {
        if !out.is_empty() {
            out.push(',');
        }
        out.push_str(k);
        out.push('=');
        out.push_str(v);
    }
    out
}

/// BFS component labelling; returns (label per node, component count).
fn component_labels<T>(n: usize, edges: &[(u32, u32, T)]) -> (Vec<usize>, usize) {
    let mut adj = vec![Vec::new(); n];
    for &(i, j, _) in edges {
        adj[i as usize].push(j);
        adj[j as usize].push(i);
    }
    let mut labels = vec![usize::MAX; n];
    let mut ncomp = 0;
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if labels[start] != usize::MAX {
            continue;
        }
        labels[start] = ncomp;
        queue.push_back(start as u32);
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v as usize] {
                if labels[u as usize] == usize::MAX {
                    labels[u as usize] = ncomp;
                    queue.push_back(u);
                }
            }
        }
        ncomp += 1;
    }
    (labels, ncomp)
}
