//! Network generators: regular rings, Watts-Strogatz rewiring and its
//! shortcut variant, Sierpinski gasket/carpet fractals and the fractal-beta
//! extension, the static scale-free model, Erdos-Renyi, hypercubes, complete
//! graphs, square/hexagonal lattices, random edge weights and edge-list
//! ingestion.
//!
//! Every stochastic generator derives its random stream by hashing
//! `(family, params, seed, attempt)` with SHA-256 into a ChaCha8 key, so jobs
//! are reproducible bit-for-bit regardless of scheduling, platform, or which
//! other jobs ran before. Generators feeding the search pipeline guarantee a
//! connected output: on failure they regenerate with `attempt + 1` up to
//! [`MAX_CONNECTIVITY_ATTEMPTS`] times, then fail loudly. Graph topology is
//! sampled with `f64` probabilities so the structure of `Graph<f32>` and
//! `Graph<f64>` agrees for identical seeds; only edge weights use `T`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::{params_string, Graph};
use crate::scalar::Real;

/// Regeneration budget before a connectivity failure is reported.
pub const MAX_CONNECTIVITY_ATTEMPTS: u32 = 100;

/// Derives the ChaCha8 stream for one generation attempt.
fn stream(family: &str, params: &BTreeMap<String, String>, seed: u64, attempt: u32) -> ChaCha8Rng {
    let tag = format!("{family}|{}|{seed}|{attempt}", params_string(params));
    let digest = Sha256::digest(tag.as_bytes());
    ChaCha8Rng::from_seed(digest.into())
}

fn fmt_param(x: f64) -> String {
    let mut s = String::new();
    write!(s, "{x}").unwrap();
    s
}

fn validate_ring(n: usize, k: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::invalid("n", "ring needs n >= 3"));
    }
    if k % 2 != 0 {
        return Err(Error::invalid("k", format!("coordination number {k} must be even")));
    }
    if k == 0 || k >= n {
        return Err(Error::invalid("k", format!("need 0 < k < n, got k = {k}, n = {n}")));
    }
    Ok(())
}

fn ring_edges(n: usize, k: usize) -> Vec<(u32, u32)> {
    let mut edges = Vec::with_capacity(n * k / 2);
    for r in 1..=(k / 2) {
        for i in 0..n {
            let j = (i + r) % n;
            edges.push((i as u32, j as u32));
        }
    }
    edges
}

/// Regular ring: node `i` connects to `i +- 1, ..., i +- k/2` (mod n).
pub fn gen_ring<T: Real>(n: usize, k: usize) -> Result<Graph<T>> {
    validate_ring(n, k)?;
    let mut params = BTreeMap::new();
    params.insert("k".into(), k.to_string());
    Graph::from_edges(
        n,
        "ring",
        params,
        None,
        ring_edges(n, k).into_iter().map(|(i, j)| (i, j, T::one())),
    )
}

/// Retry wrapper: regenerate with a derived sub-seed until connected.
fn connected_retry<T: Real, F>(
    family: &str,
    n: usize,
    params: BTreeMap<String, String>,
    seed: u64,
    mut build: F,
) -> Result<Graph<T>>
where
    F: FnMut(&mut ChaCha8Rng) -> Vec<(u32, u32)>,
{
    for attempt in 0..MAX_CONNECTIVITY_ATTEMPTS {
        let mut rng = stream(family, &params, seed, attempt);
        let edges = build(&mut rng);
        let mut full = params.clone();
        full.insert("attempt".into(), attempt.to_string());
        let g = Graph::from_edges(
            n,
            family,
            full,
            Some(seed),
            edges.into_iter().map(|(i, j)| (i, j, T::one())),
        )?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Connectivity {
        family: family.into(),
        params: params_string(&params),
        seed: Some(seed),
        attempts: MAX_CONNECTIVITY_ATTEMPTS,
    })
}

/// Applies Watts-Strogatz rewiring to a ring: scan rounds by increasing
/// neighbor offset, rewiring the far (clockwise) endpoint of each lattice
/// edge with probability `beta` to a uniformly chosen node, avoiding
/// self-loops and duplicates. Edge count is preserved.
fn rewire_ring(n: usize, k: usize, beta: f64, rng: &mut ChaCha8Rng) -> Vec<(u32, u32)> {
    let mut set: HashSet<(u32, u32)> = HashSet::with_capacity(n * k / 2);
    let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    for &(i, j) in &ring_edges(n, k) {
        set.insert(key(i, j));
    }
    let mut degrees = vec![k; n];
    for r in 1..=(k / 2) {
        for i in 0..n {
            let j = (i + r) % n;
            if rng.random::<f64>() >= beta {
                continue;
            }
            if degrees[i] == n - 1 {
                continue; // saturated node, nothing to rewire to
            }
            let m = loop {
                let c = rng.random_range(0..n as u32);
                if c as usize != i && !set.contains(&key(i as u32, c)) {
                    break c;
                }
            };
            set.remove(&key(i as u32, j as u32));
            set.insert(key(i as u32, m));
            degrees[j] -= 1;
            degrees[m as usize] += 1;
        }
    }
    let mut edges: Vec<(u32, u32)> = set.into_iter().collect();
    edges.sort_unstable();
    edges
}

/// Watts-Strogatz small-world graph. `beta = 0` reproduces the ring
/// edge-for-edge; `beta = 1` rewires every edge.
pub fn gen_ws<T: Real>(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph<T>> {
    validate_ring(n, k)?;
    validate_probability(beta)?;
    let mut params = BTreeMap::new();
    params.insert("k".into(), k.to_string());
    params.insert("beta".into(), fmt_param(beta));
    connected_retry("ws", n, params, seed, |rng| rewire_ring(n, k, beta, rng))
}

fn validate_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("beta", format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// Shortcut variant: starting from the regular ring, each candidate non-edge
/// is added independently with probability `beta`. At `beta = 1` the graph is
/// complete.
pub fn gen_ws_shortcut<T: Real>(n: usize, k: usize, beta: f64, seed: u64) -> Result<Graph<T>> {
    validate_ring(n, k)?;
    validate_probability(beta)?;
    let mut params = BTreeMap::new();
    params.insert("k".into(), k.to_string());
    params.insert("beta".into(), fmt_param(beta));
    connected_retry("ws-shortcut", n, params, seed, |rng| {
        let mut set: BTreeSet<(u32, u32)> = ring_edges(n, k)
            .into_iter()
            .map(|(i, j)| if i < j { (i, j) } else { (j, i) })
            .collect();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if set.contains(&(i, j)) {
                    continue;
                }
                if rng.random::<f64>() < beta {
                    set.insert((i, j));
                }
            }
        }
        set.into_iter().collect()
    })
}

/// Corner-point Sierpinski gasket at iteration `stage`: vertices are the
/// corner points of the elementary triangles, edges their sides.
/// `V(S) = (3^(S+1) + 3) / 2`, `E(S) = 3^(S+1)`.
pub fn gen_sierpinski_gasket<T: Real>(stage: u32) -> Result<Graph<T>> {
    if !(1..=8).contains(&stage) {
        return Err(Error::invalid("stage", format!("stage {stage} outside 1..=8")));
    }
    let (points, edges) = gasket_geometry(stage);
    let mut params = BTreeMap::new();
    params.insert("stage".into(), stage.to_string());
    Graph::from_edges(
        points.len(),
        "gasket",
        params,
        None,
        edges.into_iter().map(|(i, j)| (i, j, T::one())),
    )
}

/// Gasket corner points (sorted, densely indexed) and elementary-side edges.
fn gasket_geometry(stage: u32) -> (Vec<(i64, i64)>, Vec<(u32, u32)>) {
    let side = 1i64 << stage;
    let mut raw_edges: Vec<((i64, i64), (i64, i64))> = Vec::new();
    // affine coordinates (a, b) = a*(1,0) + b*(1/2, sqrt(3)/2)
    let mut stack = vec![((0, 0), (side, 0), (0, side))];
    while let Some((p0, p1, p2)) = stack.pop() {
        let size = p1.0 - p0.0 + p1.1 - p0.1; // side length along either axis
        if size == 1 {
            raw_edges.push((p0, p1));
            raw_edges.push((p1, p2));
            raw_edges.push((p0, p2));
            continue;
        }
        let m01 = ((p0.0 + p1.0) / 2, (p0.1 + p1.1) / 2);
        let m12 = ((p1.0 + p2.0) / 2, (p1.1 + p2.1) / 2);
        let m02 = ((p0.0 + p2.0) / 2, (p0.1 + p2.1) / 2);
        stack.push((p0, m01, m02));
        stack.push((m01, p1, m12));
        stack.push((m02, m12, p2));
    }
    let mut points: Vec<(i64, i64)> = raw_edges
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    points.sort_unstable();
    let index: HashMap<(i64, i64), u32> = points
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, i as u32))
        .collect();
    let mut edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    for (a, b) in raw_edges {
        let (i, j) = (index[&a], index[&b]);
        edges.insert(if i < j { (i, j) } else { (j, i) });
    }
    (points, edges.into_iter().collect())
}

/// Rewiring mode for [`gen_fractal_beta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractalMode {
    /// Watts-Strogatz style rewiring of the gasket edge list (edge count
    /// preserved).
    Rewire,
    /// Shortcut addition: each non-edge added independently with
    /// probability beta.
    Shortcut,
}

impl FractalMode {
    fn as_str(self) -> &'static str {
        match self {
            FractalMode::Rewire => "rewire",
            FractalMode::Shortcut => "shortcut",
        }
    }
}

/// Fractal-beta model: the WS procedure applied to the Sierpinski gasket
/// edge list. Edges are scanned in canonical order; in rewire mode the
/// larger-index endpoint is replaced.
pub fn gen_fractal_beta<T: Real>(
    stage: u32,
    beta: f64,
    seed: u64,
    mode: FractalMode,
) -> Result<Graph<T>> {
    if !(1..=8).contains(&stage) {
        return Err(Error::invalid("stage", format!("stage {stage} outside 1..=8")));
    }
    validate_probability(beta)?;
    let base: Graph<T> = gen_sierpinski_gasket(stage)?;
    let n = base.n();
    let base_edges: Vec<(u32, u32)> = base.edges().iter().map(|&(i, j, _)| (i, j)).collect();
    let mut params = BTreeMap::new();
    params.insert("stage".into(), stage.to_string());
    params.insert("beta".into(), fmt_param(beta));
    params.insert("mode".into(), mode.as_str().into());
    connected_retry("fractal-beta", n, params, seed, |rng| match mode {
        FractalMode::Rewire => {
            let mut set: HashSet<(u32, u32)> = base_edges.iter().copied().collect();
            let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
            let mut degrees = vec![0usize; n];
            for &(i, j) in &base_edges {
                degrees[i as usize] += 1;
                degrees[j as usize] += 1;
            }
            for &(u, v) in &base_edges {
                if rng.random::<f64>() >= beta {
                    continue;
                }
                if degrees[u as usize] == n - 1 {
                    continue;
                }
                let m = loop {
                    let c = rng.random_range(0..n as u32);
                    if c != u && !set.contains(&key(u, c)) {
                        break c;
                    }
                };
                set.remove(&(u, v));
                set.insert(key(u, m));
                degrees[v as usize] -= 1;
                degrees[m as usize] += 1;
            }
            let mut edges: Vec<(u32, u32)> = set.into_iter().collect();
            edges.sort_unstable();
            edges
        }
        FractalMode::Shortcut => {
            let mut set: BTreeSet<(u32, u32)> = base_edges.iter().copied().collect();
            for i in 0..n as u32 {
                for j in (i + 1)..n as u32 {
                    if set.contains(&(i, j)) {
                        continue;
                    }
                    if rng.random::<f64>() < beta {
                        set.insert((i, j));
                    }
                }
            }
            set.into_iter().collect()
        }
    })
}

/// Static scale-free model: vertex `i` (1-based) carries selection weight
/// `i^(-alpha)` with `alpha = 1 / (lambda - 1)`; vertex pairs are drawn by
/// those weights and connected if not already, until exactly `m * n` edges
/// exist. The mean degree is exactly `2m`.
pub fn gen_static_scale_free<T: Real>(
    n: usize,
    m: usize,
    lambda: f64,
    seed: u64,
) -> Result<Graph<T>> {
    if n < 10 {
        return Err(Error::invalid("n", "static scale-free model needs n >= 10"));
    }
    if m < 1 {
        return Err(Error::invalid("m", "need m >= 1"));
    }
    if !(lambda >= 2.0) {
        return Err(Error::invalid(
            "lambda",
            format!("degree exponent {lambda} < 2 unsupported (alpha = 1/(lambda-1) must lie in (0, 1])"),
        ));
    }
    let target = m * n;
    if target > n * (n - 1) / 2 {
        return Err(Error::invalid("m", format!("m*n = {target} exceeds maximum edge count")));
    }
    let alpha = if lambda.is_infinite() { 0.0 } else { 1.0 / (lambda - 1.0) };
    let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-alpha)).collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::invalid("lambda", format!("weight table: {e}")))?;
    let mut params = BTreeMap::new();
    params.insert("m".into(), m.to_string());
    params.insert("lambda".into(), fmt_param(lambda));
    connected_retry("scale-free", n, params, seed, |rng| {
        let mut set: BTreeSet<(u32, u32)> = BTreeSet::new();
        let draw_cap = 10_000usize.saturating_mul(target);
        let mut draws = 0usize;
        while set.len() < target {
            draws += 1;
            if draws > draw_cap {
                // pathological stall: hand back an edgeless attempt, which the
                // connectivity check rejects, moving on to the next sub-seed
                return Vec::new();
            }
            let i = dist.sample(rng) as u32;
            let j = dist.sample(rng) as u32;
            if i == j {
                continue;
            }
            let key = if i < j { (i, j) } else { (j, i) };
            set.insert(key);
        }
        set.into_iter().collect()
    })
}

/// Erdos-Renyi G(n, p): each pair included independently with probability
/// `p`; regenerated until connected.
pub fn gen_erdos_renyi<T: Real>(n: usize, p: f64, seed: u64) -> Result<Graph<T>> {
    if n < 2 {
        return Err(Error::invalid("n", "need n >= 2"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid("p", format!("probability {p} outside (0, 1]")));
    }
    let mut params = BTreeMap::new();
    params.insert("p".into(), fmt_param(p));
    connected_retry("er", n, params, seed, |rng| {
        let mut edges = Vec::new();
        for i in 0..n as u32 {
            for j in (i + 1)..n as u32 {
                if p >= 1.0 || rng.random::<f64>() < p {
                    edges.push((i, j));
                }
            }
        }
        edges
    })
}

/// Hypercube of dimension `d`: nodes are bitstrings, edges connect Hamming
/// distance 1. `N = 2^d`, `E = d * 2^(d-1)`.
pub fn gen_hypercube<T: Real>(d: u32) -> Result<Graph<T>> {
    if !(1..=14).contains(&d) {
        return Err(Error::invalid("d", format!("dimension {d} outside 1..=14")));
    }
    let n = 1usize << d;
    let mut edges = Vec::with_capacity(d as usize * n / 2);
    for x in 0..n as u32 {
        for b in 0..d {
            let y = x ^ (1 << b);
            if x < y {
                edges.push((x, y, T::one()));
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("d".into(), d.to_string());
    Graph::from_edges(n, "hypercube", params, None, edges)
}

/// Complete graph K_n.
pub fn gen_complete<T: Real>(n: usize) -> Result<Graph<T>> {
    if n < 2 {
        return Err(Error::invalid("n", "need n >= 2"));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n as u32 {
        for j in (i + 1)..n as u32 {
            edges.push((i, j, T::one()));
        }
    }
    Graph::from_edges(n, "complete", BTreeMap::new(), None, edges)
}

/// Lattice boundary condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

impl Boundary {
    fn as_str(self) -> &'static str {
        match self {
            Boundary::Periodic => "periodic",
            Boundary::Open => "open",
        }
    }
}

/// Square lattice `nx` x `ny`; periodic mode wraps both axes.
pub fn gen_square_lattice<T: Real>(nx: usize, ny: usize, boundary: Boundary) -> Result<Graph<T>> {
    if nx < 2 || ny < 2 {
        return Err(Error::invalid("nx", "need nx, ny >= 2"));
    }
    let idx = |x: usize, y: usize| (x * ny + y) as u32;
    let mut set: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut add = |a: u32, b: u32| {
        if a != b {
            set.insert(if a < b { (a, b) } else { (b, a) });
        }
    };
    for x in 0..nx {
        for y in 0..ny {
            match boundary {
                Boundary::Periodic => {
                    add(idx(x, y), idx((x + 1) % nx, y));
                    add(idx(x, y), idx(x, (y + 1) % ny));
                }
                Boundary::Open => {
                    if x + 1 < nx {
                        add(idx(x, y), idx(x + 1, y));
                    }
                    if y + 1 < ny {
                        add(idx(x, y), idx(x, y + 1));
                    }
                }
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("nx".into(), nx.to_string());
    params.insert("ny".into(), ny.to_string());
    params.insert("boundary".into(), boundary.as_str().into());
    Graph::from_edges(
        nx * ny,
        "square",
        params,
        None,
        set.into_iter().map(|(i, j)| (i, j, T::one())),
    )
}

/// Honeycomb lattice with a two-site basis: `N = 2 * nx * ny` nodes, degree 3
/// everywhere in periodic mode.
pub fn gen_hexagonal_lattice<T: Real>(
    nx: usize,
    ny: usize,
    boundary: Boundary,
) -> Result<Graph<T>> {
    if nx < 1 || ny < 1 {
        return Err(Error::invalid("nx", "need nx, ny >= 1"));
    }
    if boundary == Boundary::Periodic && (nx < 2 || ny < 2) {
        return Err(Error::invalid(
            "nx",
            "periodic honeycomb wrap needs nx, ny >= 2",
        ));
    }
    let site = |x: usize, y: usize, s: usize| (2 * (x * ny + y) + s) as u32;
    let mut edges: Vec<(u32, u32, T)> = Vec::with_capacity(3 * nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            let b = site(x, y, 1);
            edges.push((site(x, y, 0), b, T::one()));
            match boundary {
                Boundary::Periodic => {
                    edges.push((b, site((x + 1) % nx, y, 0), T::one()));
                    edges.push((b, site(x, (y + 1) % ny, 0), T::one()));
                }
                Boundary::Open => {
                    if x + 1 < nx {
                        edges.push((b, site(x + 1, y, 0), T::one()));
                    }
                    if y + 1 < ny {
                        edges.push((b, site(x, y + 1, 0), T::one()));
                    }
                }
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("nx".into(), nx.to_string());
    params.insert("ny".into(), ny.to_string());
    params.insert("boundary".into(), boundary.as_str().into());
    Graph::from_edges(2 * nx * ny, "hexagonal", params, None, edges)
}

/// Sierpinski carpet SC(s, s-2): subdivide a square into `s x s` cells,
/// delete the central `(s-2) x (s-2)` block, recurse `k` times. Nodes are the
/// surviving unit cells, edges connect side-sharing cells.
/// `N = (4(s-1))^k`.
pub fn gen_sierpinski_carpet<T: Real>(s: usize, k: usize) -> Result<Graph<T>> {
    if !(3..=6).contains(&s) {
        return Err(Error::invalid("s", format!("scaling factor {s} outside 3..=6")));
    }
    if k < 1 {
        return Err(Error::invalid("k", "need iteration k >= 1"));
    }
    let expect = (4 * (s - 1)).checked_pow(k as u32);
    match expect {
        Some(v) if v <= 160_000 => {}
        _ => {
            return Err(Error::invalid(
                "k",
                format!("(4(s-1))^k exceeds the 20^4 size cap for s = {s}, k = {k}"),
            ))
        }
    }
    let grid = s.pow(k as u32);
    let survives = |x: usize, y: usize| -> bool {
        let (mut xx, mut yy) = (x, y);
        for _ in 0..k {
            let (dx, dy) = (xx % s, yy % s);
            if (1..s - 1).contains(&dx) && (1..s - 1).contains(&dy) {
                return false;
            }
            xx /= s;
            yy /= s;
        }
        true
    };
    let mut index: HashMap<(usize, usize), u32> = HashMap::new();
    let mut cells: Vec<(usize, usize)> = Vec::new();
    for x in 0..grid {
        for y in 0..grid {
            if survives(x, y) {
                index.insert((x, y), cells.len() as u32);
                cells.push((x, y));
            }
        }
    }
    let mut edges = Vec::new();
    for &(x, y) in &cells {
        let a = index[&(x, y)];
        if x + 1 < grid {
            if let Some(&b) = index.get(&(x + 1, y)) {
                edges.push((a, b, T::one()));
            }
        }
        if y + 1 < grid {
            if let Some(&b) = index.get(&(x, y + 1)) {
                edges.push((a, b, T::one()));
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("s".into(), s.to_string());
    params.insert("k".into(), k.to_string());
    Graph::from_edges(cells.len(), "carpet", params, None, edges)
}

/// Replaces every edge weight of an unweighted graph by an independent
/// uniform draw from `(0, 1]`, leaving the topology unchanged.
pub fn assign_random_weights<T: Real>(g: &Graph<T>, seed: u64) -> Result<Graph<T>> {
    if g.is_weighted() {
        return Err(Error::invalid("graph", "graph already carries weights"));
    }
    let mut params = g.params().clone();
    params.insert("weights".into(), "uniform01".into());
    params.insert("weight_seed".into(), seed.to_string());
    let mut rng = stream(&format!("weights:{}", g.family()), &params, seed, 0);
    let edges: Vec<(u32, u32, T)> = g
        .edges()
        .iter()
        .map(|&(i, j, _)| {
            let u: T = rng.random_range(T::zero()..T::one());
            (i, j, T::one() - u) // maps [0,1) draws onto (0,1]
        })
        .collect();
    Graph::from_edges(g.n(), g.family(), params, g.seed(), edges)
}

/// Edge-list input dialects for [`ingest_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeListFormat {
    /// One `i j [w]` per line, whitespace separated, `#` comments.
    Plain,
    /// MatrixMarket `coordinate pattern` header, 1-based indices.
    MatrixMarketPattern,
}

/// What ingestion had to clean up.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IngestReport {
    pub dropped_self_loops: usize,
    pub dropped_duplicates: usize,
    pub component_extracted: bool,
    pub original_n: usize,
}

/// Reads an edge list, re-indexes nodes densely, drops self-loops and
/// duplicates (counted), and keeps the largest connected component when the
/// input is disconnected. The cleanup is recorded both in the report and in
/// the graph params.
pub fn ingest_edge_list<T: Real>(
    path: impl AsRef<Path>,
    format: EdgeListFormat,
) -> Result<(Graph<T>, IngestReport)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let name = path.display().to_string();
    let raw = match format {
        EdgeListFormat::Plain => parse_plain::<T>(&name, &text)?,
        EdgeListFormat::MatrixMarketPattern => parse_matrix_market::<T>(&name, &text)?,
    };
    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    // dense re-index in sorted original-id order
    let ids: BTreeSet<u64> = raw.iter().flat_map(|&(a, b, _)| [a, b]).collect();
    let remap: HashMap<u64, u32> = ids.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
    let n = ids.len();

    let mut report = IngestReport {
        original_n: n,
        ..Default::default()
    };
    let mut seen: HashSet<(u32, u32)> = HashSet::new();
    let mut edges: Vec<(u32, u32, T)> = Vec::new();
    for (a, b, w) in raw {
        if a == b {
            report.dropped_self_loops += 1;
            continue;
        }
        let (i, j) = {
            let (x, y) = (remap[&a], remap[&b]);
            if x < y { (x, y) } else { (y, x) }
        };
        if !seen.insert((i, j)) {
            report.dropped_duplicates += 1;
            continue;
        }
        edges.push((i, j, w));
    }
    if edges.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut params = BTreeMap::new();
    params.insert(
        "source".into(),
        path.file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| name.clone()),
    );
    params.insert("dropped_self_loops".into(), report.dropped_self_loops.to_string());
    params.insert("dropped_duplicates".into(), report.dropped_duplicates.to_string());
    let g = Graph::from_edges(n, "ingest", params, None, edges)?;
    if g.is_connected() {
        return Ok((g, report));
    }
    report.component_extracted = true;
    let (mut lcc, _) = g.largest_component();
    let mut params = lcc.params().clone();
    params.insert("component_extracted".into(), "true".into());
    params.insert("original_n".into(), n.to_string());
    lcc = Graph::from_edges(
        lcc.n(),
        "ingest",
        params,
        None,
        lcc.edges().iter().copied(),
    )?;
    Ok((lcc, report))
}

fn parse_plain<T: Real>(name: &str, text: &str) -> Result<Vec<(u64, u64, T)>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse_id = |tok: Option<&str>| -> Result<u64> {
            tok.ok_or_else(|| Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: "expected `i j [w]`".into(),
            })?
            .parse::<u64>()
            .map_err(|e| Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: format!("bad node id: {e}"),
            })
        };
        let a = parse_id(it.next())?;
        let b = parse_id(it.next())?;
        let w = match it.next() {
            None => T::one(),
            Some(tok) => {
                let w: f64 = tok.parse().map_err(|e| Error::Parse {
                    path: name.into(),
                    line: lineno + 1,
                    reason: format!("bad weight: {e}"),
                })?;
                if !(w > 0.0 && w <= 1.0) {
                    return Err(Error::Parse {
                        path: name.into(),
                        line: lineno + 1,
                        reason: format!("weight {w} outside (0, 1]"),
                    });
                }
                crate::scalar::real(w)
            }
        };
        if it.next().is_some() {
            return Err(Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: "trailing fields".into(),
            });
        }
        out.push((a, b, w));
    }
    Ok(out)
}

fn parse_matrix_market<T: Real>(name: &str, text: &str) -> Result<Vec<(u64, u64, T)>> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::EmptyGraph)?;
    if !header.starts_with("%%MatrixMarket")
        || !header.contains("coordinate")
        || !header.contains("pattern")
    {
        return Err(Error::Parse {
            path: name.into(),
            line: 1,
            reason: "expected `%%MatrixMarket matrix coordinate pattern ...` header".into(),
        });
    }
    let mut out = Vec::new();
    let mut dims_seen = false;
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if !dims_seen {
            if toks.len() != 3 {
                return Err(Error::Parse {
                    path: name.into(),
                    line: lineno + 1,
                    reason: "expected dimensions line `rows cols nnz`".into(),
                });
            }
            dims_seen = true;
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: "pattern entries must be `i j`".into(),
            });
        }
        let parse = |tok: &str| -> Result<u64> {
            tok.parse::<u64>().map_err(|e| Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: format!("bad index: {e}"),
            })
        };
        let (a, b) = (parse(toks[0])?, parse(toks[1])?);
        if a == 0 || b == 0 {
            return Err(Error::Parse {
                path: name.into(),
                line: lineno + 1,
                reason: "MatrixMarket indices are 1-based".into(),
            });
        }
        out.push((a - 1, b - 1, T::one()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = Graph<f64>;

    #[test]
    fn ring_examples() {
        let c4: G = gen_ring(4, 2).unwrap();
        assert_eq!(c4.edge_count(), 4);
        let g: G = gen_ring(400, 4).unwrap();
        assert_eq!(g.edge_count(), 800);
        assert!(g.degrees().iter().all(|&d| d == 4));
        let tri: G = gen_ring(3, 2).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert!(gen_ring::<f64>(10, 3).is_err()); // odd k
        assert!(gen_ring::<f64>(4, 4).is_err()); // k >= n
    }

    #[test]
    fn ws_beta_zero_is_ring() {
        let ring: G = gen_ring(400, 4).unwrap();
        let ws: G = gen_ws(400, 4, 0.0, 12345).unwrap();
        let ring_edges: Vec<(u32, u32)> = ring.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        let ws_edges: Vec<(u32, u32)> = ws.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        assert_eq!(ring_edges, ws_edges);
    }

    #[test]
    fn ws_beta_one_preserves_edge_count() {
        let g: G = gen_ws(400, 4, 1.0, 1).unwrap();
        assert_eq!(g.edge_count(), 800);
        let degs = g.degrees();
        assert!(degs.iter().any(|&d| d != 4), "degrees should vary at beta = 1");
        assert!(g.is_connected());
    }

    #[test]
    fn ws_small_world_fixture() {
        let g: G = gen_ws(27, 4, 0.6, 7).unwrap();
        assert_eq!(g.n(), 27);
        assert_eq!(g.edge_count(), 54);
        assert!(g.is_connected());
        // determinism
        let h: G = gen_ws(27, 4, 0.6, 7).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn ws_shortcut_limits() {
        let c10: G = gen_ws_shortcut(10, 2, 0.0, 1).unwrap();
        assert_eq!(c10.edge_count(), 10);
        let k10: G = gen_ws_shortcut(10, 2, 1.0, 1).unwrap();
        assert_eq!(k10.edge_count(), 45);
    }

    #[test]
    fn ws_shortcut_adds_edges() {
        for seed in 0..100 {
            let g: G = gen_ws_shortcut(50, 4, 0.1, seed).unwrap();
            assert!(g.edge_count() > 100, "seed {seed} added no shortcut");
        }
    }

    #[test]
    fn gasket_counts() {
        for stage in 1..=5u32 {
            let g: G = gen_sierpinski_gasket(stage).unwrap();
            let v = (3usize.pow(stage + 1) + 3) / 2;
            assert_eq!(g.n(), v, "stage {stage}");
            assert_eq!(g.edge_count(), 3usize.pow(stage + 1));
            assert!(g.is_connected());
        }
        let s1: G = gen_sierpinski_gasket(1).unwrap();
        assert_eq!((s1.n(), s1.edge_count()), (6, 9));
        assert!(gen_sierpinski_gasket::<f64>(0).is_err());
        assert!(gen_sierpinski_gasket::<f64>(9).is_err());
    }

    #[test]
    fn fractal_beta_zero_is_gasket() {
        let a: G = gen_sierpinski_gasket(3).unwrap();
        let b: G = gen_fractal_beta(3, 0.0, 5, FractalMode::Rewire).unwrap();
        let ae: Vec<_> = a.edges().iter().map(|&(i, j, _)| (i, j)).collect::<Vec<_>>();
        let be: Vec<_> = b.edges().iter().map(|&(i, j, _)| (i, j)).collect::<Vec<_>>();
        assert_eq!(ae, be);
    }

    #[test]
    fn fractal_beta_rewire_preserves_count() {
        let base: G = gen_sierpinski_gasket(4).unwrap();
        let g: G = gen_fractal_beta(4, 0.2, 11, FractalMode::Rewire).unwrap();
        assert_eq!(g.edge_count(), base.edge_count());
        let be: BTreeSet<(u32, u32)> = base.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        let ge: BTreeSet<(u32, u32)> = g.edges().iter().map(|&(i, j, _)| (i, j)).collect();
        assert_ne!(be, ge, "expected at least one rewired edge");
    }

    #[test]
    fn fractal_beta_shortcut_saturates() {
        let g: G = gen_fractal_beta(3, 1.0, 1, FractalMode::Shortcut).unwrap();
        let n = g.n();
        assert_eq!(g.edge_count(), n * (n - 1) / 2);
    }

    #[test]
    fn scale_free_edge_count_exact() {
        let g: G = gen_static_scale_free(800, 2, 3.0, 5).unwrap();
        assert_eq!(g.edge_count(), 1600);
        let (kmin, _, _, kmean) = crate::metrics::degree_stats(&g);
        assert!(kmin >= 1);
        assert!((kmean - 4.0).abs() < 1e-12);
        assert!(g.is_connected());
    }

    #[test]
    fn scale_free_uniform_limit() {
        let g: G = gen_static_scale_free(100, 2, f64::INFINITY, 3).unwrap();
        assert_eq!(g.edge_count(), 200);
        assert!(gen_static_scale_free::<f64>(100, 2, 1.9, 3).is_err());
    }

    #[test]
    fn erdos_renyi_basics() {
        let k5: G = gen_erdos_renyi(5, 1.0, 1).unwrap();
        assert_eq!(k5.edge_count(), 10);
        let g: G = gen_erdos_renyi(400, 0.1, 2).unwrap();
        let mean = 0.1 * (400.0 * 399.0 / 2.0);
        let sd = (mean * 0.9).sqrt();
        let e = g.edge_count() as f64;
        assert!((e - mean).abs() < 3.0 * sd, "edge count {e} vs {mean} +- 3*{sd:.1}");
        // sparse case exercises the retry loop; must still come back connected
        let sparse: G = gen_erdos_renyi(50, 0.02, 4).unwrap();
        assert!(sparse.is_connected());
        let attempt: u32 = sparse.params()["attempt"].parse().unwrap();
        assert!(attempt < MAX_CONNECTIVITY_ATTEMPTS);
    }

    #[test]
    fn hypercube_counts() {
        let e1: G = gen_hypercube(1).unwrap();
        assert_eq!((e1.n(), e1.edge_count()), (2, 1));
        let c: G = gen_hypercube(3).unwrap();
        assert_eq!((c.n(), c.edge_count()), (8, 12));
        let h8: G = gen_hypercube(8).unwrap();
        assert_eq!((h8.n(), h8.edge_count()), (256, 1024));
    }

    #[test]
    fn complete_counts() {
        for (n, e) in [(2usize, 1usize), (4, 6), (256, 32640)] {
            let g: G = gen_complete(n).unwrap();
            assert_eq!(g.edge_count(), e);
        }
    }

    #[test]
    fn square_lattice() {
        let c4: G = gen_square_lattice(2, 2, Boundary::Open).unwrap();
        assert_eq!((c4.n(), c4.edge_count()), (4, 4));
        let t: G = gen_square_lattice(20, 20, Boundary::Periodic).unwrap();
        assert_eq!((t.n(), t.edge_count()), (400, 800));
        assert!(t.degrees().iter().all(|&d| d == 4));
        let o: G = gen_square_lattice(3, 3, Boundary::Open).unwrap();
        assert_eq!((o.n(), o.edge_count()), (9, 12));
    }

    #[test]
    fn hexagonal_lattice() {
        let g: G = gen_hexagonal_lattice(10, 20, Boundary::Periodic).unwrap();
        assert_eq!((g.n(), g.edge_count()), (400, 600));
        assert!(g.degrees().iter().all(|&d| d == 3));
        let p4: G = gen_hexagonal_lattice(1, 2, Boundary::Open).unwrap();
        assert_eq!((p4.n(), p4.edge_count()), (4, 3));
        assert_eq!(p4.degrees(), vec![1, 2, 2, 1]);
        let big: G = gen_hexagonal_lattice(15, 30, Boundary::Periodic).unwrap();
        assert_eq!(big.n(), 900);
        assert!(gen_hexagonal_lattice::<f64>(1, 5, Boundary::Periodic).is_err());
    }

    #[test]
    fn carpet_counts() {
        let ring: G = gen_sierpinski_carpet(3, 1).unwrap();
        assert_eq!((ring.n(), ring.edge_count()), (8, 8));
        let g2: G = gen_sierpinski_carpet(3, 2).unwrap();
        assert_eq!(g2.n(), 64);
        let g52: G = gen_sierpinski_carpet(5, 2).unwrap();
        assert_eq!(g52.n(), 256);
        for (s, k) in [(3usize, 3usize), (4, 2), (6, 2)] {
            let g: G = gen_sierpinski_carpet(s, k).unwrap();
            assert_eq!(g.n(), (4 * (s - 1)).pow(k as u32));
            assert!(g.is_connected());
        }
        assert!(gen_sierpinski_carpet::<f64>(6, 5).is_err());
    }

    #[test]
    fn random_weights() {
        let k3: G = gen_complete(3).unwrap();
        let w = assign_random_weights(&k3, 1).unwrap();
        assert!(w.edges().iter().all(|&(_, _, x)| x > 0.0 && x <= 1.0));
        let w2 = assign_random_weights(&k3, 1).unwrap();
        assert_eq!(w, w2);
        let g: G = gen_sierpinski_gasket(3).unwrap();
        let a = assign_random_weights(&g, 1).unwrap();
        let b = assign_random_weights(&g, 2).unwrap();
        assert_ne!(a.edges(), b.edges());
        assert!(assign_random_weights(&a, 3).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        let a: G = gen_static_scale_free(200, 2, 2.5, 9).unwrap();
        let b: G = gen_static_scale_free(200, 2, 2.5, 9).unwrap();
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
    }

    #[test]
    fn ingest_plain() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p3.txt");
        std::fs::write(&p, "0 1\n1 2\n").unwrap();
        let (g, report): (G, _) = ingest_edge_list(&p, EdgeListFormat::Plain).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
        assert_eq!(report, IngestReport { original_n: 3, ..Default::default() });

        let d = dir.path().join("dup.txt");
        std::fs::write(&d, "# comment\n0 1\n0 1\n1 2\n2 2\n").unwrap();
        let (g, report): (G, _) = ingest_edge_list(&d, EdgeListFormat::Plain).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(report.dropped_duplicates, 1);
        assert_eq!(report.dropped_self_loops, 1);

        let two = dir.path().join("two.txt");
        std::fs::write(&two, "0 1\n1 2\n5 6\n").unwrap();
        let (g, report): (G, _) = ingest_edge_list(&two, EdgeListFormat::Plain).unwrap();
        assert!(report.component_extracted);
        assert_eq!(g.n(), 3);
        assert_eq!(g.params()["component_extracted"], "true");

        let bad = dir.path().join("bad.txt");
        std::fs::write(&bad, "0 1\nx 2\n").unwrap();
        let err = ingest_edge_list::<f64>(&bad, EdgeListFormat::Plain).unwrap_err();
        assert!(err.to_string().contains(":2:"), "line number in {err}");
    }

    #[test]
    fn ingest_matrix_market() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.mtx");
        std::fs::write(
            &p,
            "%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n3 3 2\n1 2\n2 3\n",
        )
        .unwrap();
        let (g, _): (G, _) = ingest_edge_list(&p, EdgeListFormat::MatrixMarketPattern).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 2));
    }
}
