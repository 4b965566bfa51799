//! Monte Carlo validation: samples sparse random graphs and d-uniform
//! hypergraphs, classifies components, extracts fragments, counts short
//! cycles exactly, and compares the empirical laws against the analytic
//! predictions.
//!
//! Trials are independent: each derives its own counter-based random stream
//! from (master_seed, trial_index), so results are reproducible regardless
//! of scheduling. All aggregation is over integer counts; derived statistics
//! are computed once at the end, which keeps results bit-identical.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fragment::{ComponentClass, FragmentShape};
use crate::hyper::canonical_hyper_unicycle;
use crate::jsonout::JVal;
use crate::limits;
use crate::model::{ModelKind, ModelParams};
use crate::stats;
use crate::unicycle::canonical_unicycle;

/// Largest cycle length trackable exactly; the search is exponential in the
/// length.
pub const MAX_CYCLE_LEN_GRAPH: u32 = 8;
pub const MAX_CYCLE_LEN_HYPER: u32 = 5;

#[derive(Debug, Clone, Copy)]
pub struct SampleConfig {
    pub model: ModelParams,
    pub n: u32,
    pub trials: u32,
    pub master_seed: u64,
    /// Cycle lengths tracked: min_cycle_len ..= max_cycle_len.
    pub max_cycle_len: u32,
    /// Retain per-trial records (for CSV dumps).
    pub keep_trial_records: bool,
}

impl SampleConfig {
    pub fn new(model: ModelParams, n: u32, trials: u32, master_seed: u64) -> Result<SampleConfig> {
        let max_cycle_len = match model.kind {
            ModelKind::Graph => 4,
            ModelKind::Hypergraph { .. } => 3,
        };
        SampleConfig {
            model,
            n,
            trials,
            master_seed,
            max_cycle_len,
            keep_trial_records: false,
        }
        .validated()
    }

    pub fn with_max_cycle_len(mut self, max_cycle_len: u32) -> Result<SampleConfig> {
        self.max_cycle_len = max_cycle_len;
        self.validated()
    }

    fn validated(self) -> Result<SampleConfig> {
        if self.trials < 1 {
            return Err(Error::Domain("trials must be >= 1".into()));
        }
        let d = self.model.kind.uniformity();
        if self.n < d {
            return Err(Error::Domain(format!(
                "n = {} below the edge arity {d}",
                self.n
            )));
        }
        let cap = match self.model.kind {
            ModelKind::Graph => MAX_CYCLE_LEN_GRAPH,
            ModelKind::Hypergraph { .. } => MAX_CYCLE_LEN_HYPER,
        };
        if self.max_cycle_len > cap {
            return Err(Error::Budget {
                requested: self.max_cycle_len,
                cap,
            });
        }
        if self.max_cycle_len < self.model.kind.min_cycle_len() {
            return Err(Error::Domain(format!(
                "max_cycle_len {} below the minimal cycle length",
                self.max_cycle_len
            )));
        }
        Ok(self)
    }
}

/// One sampled structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSample {
    Graph(Vec<(u32, u32)>),
    Hyper { d: u32, edges: Vec<Vec<u32>> },
}

impl ModelSample {
    pub fn edge_count(&self) -> usize {
        match self {
            ModelSample::Graph(e) => e.len(),
            ModelSample::Hyper { edges, .. } => edges.len(),
        }
    }
}

fn trial_rng(master_seed: u64, trial_index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index as u64 + 1);
    rng
}

/// Draw one sample. Deterministic in (master_seed, trial_index).
pub fn sample_model(config: &SampleConfig, trial_index: u32) -> ModelSample {
    let mut rng = trial_rng(config.master_seed, trial_index);
    let n = config.n as u64;
    match config.model.kind {
        ModelKind::Graph => {
            let p = config.model.c / config.n as f64;
            ModelSample::Graph(sample_gnp(&mut rng, n, p))
        }
        ModelKind::Hypergraph { d } => {
            let p = config.model.c / (config.n as f64).powi(d as i32 - 1);
            ModelSample::Hyper {
                d,
                edges: sample_hyper(&mut rng, n, d, p),
            }
        }
    }
}

/// Skip-sampling over the C(n,2) pair indices with geometric gaps.
fn sample_gnp(rng: &mut ChaCha8Rng, n: u64, p: f64) -> Vec<(u32, u32)> {
    let total = n * (n - 1) / 2;
    let mut edges = Vec::new();
    if p <= 0.0 || total == 0 {
        return edges;
    }
    if p >= 1.0 {
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i as u32, j as u32));
            }
        }
        return edges;
    }
    let ln_q = (-p).ln_1p();
    let mut idx: u64 = 0;
    loop {
        let u: f64 = rng.gen();
        let skip = ((1.0 - u).ln() / ln_q).floor();
        if !skip.is_finite() || skip >= (total - idx) as f64 {
            break;
        }
        idx += skip as u64;
        edges.push(decode_pair(n, idx));
        idx += 1;
        if idx >= total {
            break;
        }
    }
    edges
}

/// Pair index -> (i, j) with i < j, rows ordered by i.
fn decode_pair(n: u64, idx: u64) -> (u32, u32) {
    let offset = |i: u64| i * (n - 1) - i * (i.saturating_sub(1)) / 2;
    let disc = ((2 * n - 1) as f64).powi(2) - 8.0 * idx as f64;
    let mut i = (((2 * n - 1) as f64 - disc.max(0.0).sqrt()) / 2.0).floor() as u64;
    i = i.min(n - 2);
    while offset(i) > idx {
        i -= 1;
    }
    while i < n - 2 && offset(i + 1) <= idx {
        i += 1;
    }
    let j = i + 1 + (idx - offset(i));
    (i as u32, j as u32)
}

/// Edge count from the binomial over all d-sets, then that many distinct
/// d-sets sampled uniformly.
fn sample_hyper(rng: &mut ChaCha8Rng, n: u64, d: u32, p: f64) -> Vec<Vec<u32>> {
    let candidates = binom_u64(n, d).expect("candidate count must fit u64");
    if p <= 0.0 {
        return Vec::new();
    }
    let m = if p >= 1.0 {
        candidates
    } else {
        Binomial::new(candidates, p).expect("binomial params").sample(rng)
    };
    let mut seen = std::collections::HashSet::with_capacity(m as usize * 2);
    let mut edges = Vec::with_capacity(m as usize);
    while (edges.len() as u64) < m {
        let mut e: Vec<u32> = Vec::with_capacity(d as usize);
        while e.len() < d as usize {
            let v = rng.gen_range(0..n) as u32;
            if !e.contains(&v) {
                e.push(v);
            }
        }
        e.sort_unstable();
        if seen.insert(e.clone()) {
            edges.push(e);
        }
    }
    edges
}

fn binom_u64(n: u64, d: u32) -> Result<u64> {
    let mut r: u128 = 1;
    for i in 0..d as u128 {
        r = r * (n as u128 - i) / (i + 1);
        if r > u64::MAX as u128 {
            return Err(Error::Domain(format!(
                "candidate edge count C({n},{d}) exceeds u64"
            )));
        }
    }
    Ok(r as u64)
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let g = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = g;
            v = g;
        }
        v
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    Tree,
    Unicyclic,
    Complex,
}

/// Per-component census of a sample.
#[derive(Debug, Clone)]
pub struct ComponentBreakdown {
    pub trees: u64,
    pub unicyclic: u64,
    pub complex: u64,
    /// (vertices, edges) for every component, isolated vertices included.
    pub components: Vec<(u32, u32)>,
}

fn vertices_of<'a>(sample: &'a ModelSample) -> Box<dyn Iterator<Item = Vec<u32>> + 'a> {
    match sample {
        ModelSample::Graph(edges) => Box::new(edges.iter().map(|&(a, b)| vec![a, b])),
        ModelSample::Hyper { edges, .. } => Box::new(edges.iter().cloned()),
    }
}

fn excess_kind(d: u32, vertices: u32, edges: u32) -> ComponentKind {
    let weight = (d as u64 - 1) * edges as u64;
    match weight.cmp(&(vertices as u64 - 1)) {
        std::cmp::Ordering::Less | std::cmp::Ordering::Equal => ComponentKind::Tree,
        std::cmp::Ordering::Greater => {
            if weight == vertices as u64 {
                ComponentKind::Unicyclic
            } else {
                ComponentKind::Complex
            }
        }
    }
}

/// Union-find pass classifying every component as tree, unicyclic or
/// complex by its excess.
pub fn classify_components(n: u32, sample: &ModelSample) -> ComponentBreakdown {
    let d = match sample {
        ModelSample::Graph(_) => 2,
        ModelSample::Hyper { d, .. } => *d,
    };
    let mut uf = UnionFind::new(n as usize);
    for vs in vertices_of(sample) {
        for w in vs.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut edge_count: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for vs in vertices_of(sample) {
        *edge_count.entry(uf.find(vs[0])).or_insert(0) += 1;
    }
    let mut breakdown = ComponentBreakdown {
        trees: 0,
        unicyclic: 0,
        complex: 0,
        components: Vec::new(),
    };
    for v in 0..n {
        if uf.find(v) == v {
            let vertices = uf.size[v as usize];
            let edges = edge_count.get(&v).copied().unwrap_or(0);
            breakdown.components.push((vertices, edges));
            match excess_kind(d, vertices, edges) {
                ComponentKind::Tree => breakdown.trees += 1,
                ComponentKind::Unicyclic => breakdown.unicyclic += 1,
                ComponentKind::Complex => breakdown.complex += 1,
            }
        }
    }
    breakdown
}

/// Canonical shape of the union of all unicyclic components.
pub fn extract_fragment_shape(n: u32, sample: &ModelSample) -> Result<FragmentShape> {
    let (classes, _) = fragment_and_complex(n, sample)?;
    Ok(classes)
}

/// Fragment shape plus whether any complex component is present.
fn fragment_and_complex(n: u32, sample: &ModelSample) -> Result<(FragmentShape, bool)> {
    let d = match sample {
        ModelSample::Graph(_) => 2,
        ModelSample::Hyper { d, .. } => *d,
    };
    let mut uf = UnionFind::new(n as usize);
    for vs in vertices_of(sample) {
        for w in vs.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut edge_count: std::collections::HashMap<u32, u32> = std::collections::HashMap::new();
    for vs in vertices_of(sample) {
        *edge_count.entry(uf.find(vs[0])).or_insert(0) += 1;
    }
    let mut complex_present = false;
    let mut unicyclic_roots: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for (&root, &edges) in &edge_count {
        match excess_kind(d, uf.size[root as usize], edges) {
            ComponentKind::Unicyclic => {
                unicyclic_roots.insert(root);
            }
            ComponentKind::Complex => complex_present = true,
            ComponentKind::Tree => {}
        }
    }
    if unicyclic_roots.is_empty() {
        return Ok((FragmentShape::empty(), complex_present));
    }
    // Gather each unicyclic component's edges with a local relabeling.
    type LocalEdges = (Vec<Vec<u32>>, std::collections::HashMap<u32, u32>);
    let mut local: std::collections::HashMap<u32, LocalEdges> = unicyclic_roots
            .iter()
            .map(|&r| (r, (Vec::new(), std::collections::HashMap::new())))
            .collect();
    for vs in vertices_of(sample) {
        let root = uf.find(vs[0]);
        if let Some((edges, names)) = local.get_mut(&root) {
            let mapped: Vec<u32> = vs
                .iter()
                .map(|&v| {
                    let fresh = names.len() as u32;
                    *names.entry(v).or_insert(fresh)
                })
                .collect();
            edges.push(mapped);
        }
    }
    let mut parts: Vec<ComponentClass> = Vec::new();
    let mut roots: Vec<u32> = local.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        let (edges, names) = &local[&root];
        let nv = names.len();
        let class = match sample {
            ModelSample::Graph(_) => {
                let pairs: Vec<(u32, u32)> = edges.iter().map(|e| (e[0], e[1])).collect();
                let s = canonical_unicycle(nv, &pairs)?;
                ComponentClass {
                    code: s.code,
                    size: s.size,
                    aut: s.aut,
                }
            }
            ModelSample::Hyper { d, .. } => {
                let s = canonical_hyper_unicycle(*d, nv, edges)?;
                ComponentClass {
                    code: s.code,
                    size: s.size,
                    aut: s.aut,
                }
            }
        };
        parts.push(class);
    }
    let refs: Vec<&ComponentClass> = parts.iter().collect();
    Ok((FragmentShape::from_components(&refs), complex_present))
}

/// Exact count of k-cycles for each tracked length.
pub fn count_short_cycles(n: u32, sample: &ModelSample, max_len: u32) -> Result<Vec<(u32, u64)>> {
    match sample {
        ModelSample::Graph(edges) => {
            if max_len > MAX_CYCLE_LEN_GRAPH {
                return Err(Error::Budget {
                    requested: max_len,
                    cap: MAX_CYCLE_LEN_GRAPH,
                });
            }
            Ok(count_graph_cycles(n, edges, max_len))
        }
        ModelSample::Hyper { d, edges } => {
            if max_len > MAX_CYCLE_LEN_HYPER {
                return Err(Error::Budget {
                    requested: max_len,
                    cap: MAX_CYCLE_LEN_HYPER,
                });
            }
            Ok(count_hyper_cycles(*d, edges, max_len))
        }
    }
}

/// Anchored path search: every cycle is counted from its smallest vertex,
/// in both directions, so totals are halved.
fn count_graph_cycles(n: u32, edges: &[(u32, u32)], max_len: u32) -> Vec<(u32, u64)> {
    if max_len < 3 {
        return Vec::new();
    }
    // CSR adjacency.
    let mut deg = vec![0u32; n as usize + 1];
    for &(a, b) in edges {
        deg[a as usize + 1] += 1;
        deg[b as usize + 1] += 1;
    }
    let start: Vec<u32> = deg
        .iter()
        .scan(0u32, |acc, &d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let mut fill = start.clone();
    let mut adj = vec![0u32; 2 * edges.len()];
    for &(a, b) in edges {
        adj[fill[a as usize] as usize] = b;
        fill[a as usize] += 1;
        adj[fill[b as usize] as usize] = a;
        fill[b as usize] += 1;
    }
    let neighbors = |v: u32| -> &[u32] {
        &adj[start[v as usize] as usize..start[v as usize + 1] as usize]
    };
    let mut doubled = vec![0u64; max_len as usize + 1];
    let mut path: Vec<u32> = Vec::with_capacity(max_len as usize);
    let mut on_path = vec![false; n as usize];
    for anchor in 0..n {
        if neighbors(anchor).len() < 2 {
            continue;
        }
        path.clear();
        path.push(anchor);
        on_path[anchor as usize] = true;
        dfs_cycles(anchor, anchor, neighbors(anchor), &|v| neighbors(v), max_len, &mut path, &mut on_path, &mut doubled);
        on_path[anchor as usize] = false;
    }
    (3..=max_len).map(|k| (k, doubled[k as usize] / 2)).collect()
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles<'a, F>(
    anchor: u32,
    current: u32,
    current_nbrs: &[u32],
    neighbors: &F,
    max_len: u32,
    path: &mut Vec<u32>,
    on_path: &mut [bool],
    doubled: &mut [u64],
) where
    F: Fn(u32) -> &'a [u32],
{
    for &next in current_nbrs {
        if next == anchor && path.len() >= 3 {
            doubled[path.len()] += 1;
        }
        if next > anchor && !on_path[next as usize] && (path.len() as u32) < max_len {
            path.push(next);
            on_path[next as usize] = true;
            dfs_cycles(anchor, next, neighbors(next), neighbors, max_len, path, on_path, doubled);
            on_path[next as usize] = false;
            path.pop();
        }
    }
    let _ = current;
}

/// Cycles in the hypergraph sense: 2-cycles are edge pairs sharing exactly
/// two vertices; longer cycles are edge rings where adjacent edges share
/// exactly one vertex, all shared vertices distinct, and non-adjacent edges
/// are disjoint.
fn count_hyper_cycles(_d: u32, edges: &[Vec<u32>], max_len: u32) -> Vec<(u32, u64)> {
    let m = edges.len();
    let inter = |a: usize, b: usize| -> u32 {
        edges[a].iter().filter(|v| edges[b].contains(v)).count() as u32
    };
    // Inverted index to find candidate intersecting pairs.
    let mut by_vertex: std::collections::HashMap<u32, Vec<usize>> = std::collections::HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut touching: Vec<Vec<usize>> = vec![Vec::new(); m];
    {
        let mut pairs: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
        for ids in by_vertex.values() {
            for (x, &a) in ids.iter().enumerate() {
                for &b in ids.iter().skip(x + 1) {
                    pairs.insert((a.min(b), a.max(b)));
                }
            }
        }
        for (a, b) in pairs {
            touching[a].push(b);
            touching[b].push(a);
        }
        for t in &mut touching {
            t.sort_unstable();
        }
    }
    let mut counts: Vec<(u32, u64)> = Vec::new();
    // 2-cycles.
    let mut two = 0u64;
    for (a, touch) in touching.iter().enumerate() {
        for &b in touch {
            if b > a && inter(a, b) == 2 {
                two += 1;
            }
        }
    }
    counts.push((2, two));
    // k >= 3: rings anchored at their smallest edge index, one direction.
    for k in 3..=max_len as usize {
        let mut found = 0u64;
        let mut ring: Vec<usize> = Vec::with_capacity(k);
        for a in 0..m {
            ring.clear();
            ring.push(a);
            found += extend_ring(a, k, &mut ring, &touching, &inter);
        }
        counts.push((k as u32, found));
    }
    counts
}

fn extend_ring(
    anchor: usize,
    k: usize,
    ring: &mut Vec<usize>,
    touching: &[Vec<usize>],
    inter: &dyn Fn(usize, usize) -> u32,
) -> u64 {
    if ring.len() == k {
        // Close: last must touch the anchor in exactly one vertex, and the
        // ring must be a genuine cycle (validated below).
        if inter(*ring.last().unwrap(), anchor) != 1 {
            return 0;
        }
        // Direction dedup: second < last.
        if ring[1] > ring[k - 1] {
            return 0;
        }
        return if valid_ring(ring, inter) { 1 } else { 0 };
    }
    let mut found = 0;
    let last = *ring.last().unwrap();
    for &cand in &touching[last] {
        if cand <= anchor || ring.contains(&cand) {
            continue;
        }
        if inter(last, cand) != 1 {
            continue;
        }
        ring.push(cand);
        found += extend_ring(anchor, k, ring, touching, inter);
        ring.pop();
    }
    found
}

/// All adjacency constraints of a candidate ring: adjacent edges share one
/// vertex, the shared vertices are pairwise distinct, non-adjacent edges are
/// disjoint.
fn valid_ring(ring: &[usize], inter: &dyn Fn(usize, usize) -> u32) -> bool {
    let k = ring.len();
    for i in 0..k {
        for j in i + 1..k {
            let adjacent = j == i + 1 || (i == 0 && j == k - 1);
            let want = u32::from(adjacent);
            if inter(ring[i], ring[j]) != want {
                return false;
            }
        }
    }
    true
}

/// Per-length comparison of empirical cycle counts with the Poisson law.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleLawStats {
    pub len: u32,
    pub lambda: f64,
    pub mean: f64,
    pub tv_distance: f64,
    pub histogram: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceStats {
    pub len_a: u32,
    pub len_b: u32,
    pub covariance: f64,
    pub standard_error: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentChiSquare {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
    /// (shape code or "other", observed, expected).
    pub bins: Vec<(String, f64, f64)>,
    /// Set when pooling left fewer than two usable bins.
    pub downgraded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: u32,
    pub cycle_counts: Vec<(u32, u64)>,
    pub fragment_code: String,
    pub acyclic: bool,
    pub complex_present: bool,
}

/// Aggregated simulation outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub n: u32,
    pub trials: u32,
    pub c: f64,
    pub master_seed: u64,
    pub acyclic_trials: u64,
    pub acyclic_fraction: f64,
    /// Subcritical models only.
    pub predicted_acyclic: Option<f64>,
    pub acyclic_z: Option<f64>,
    pub cycle_laws: Vec<CycleLawStats>,
    pub cycle_covariance: Option<CovarianceStats>,
    pub fragment_freqs: BTreeMap<String, u64>,
    pub mean_fragment_size: f64,
    pub fragment_size_variance: f64,
    pub complex_trials: u64,
    pub fragment_chi_square: Option<FragmentChiSquare>,
    pub trial_records: Option<Vec<TrialRecord>>,
}

/// Run all trials (in parallel), aggregate counts, and attach comparison
/// statistics.
pub fn run_experiment(config: &SampleConfig) -> Result<SimResult> {
    let min_len = config.model.kind.min_cycle_len();
    let lens: Vec<u32> = (min_len..=config.max_cycle_len).collect();
    struct Trial {
        cycle_counts: Vec<u64>,
        fragment_code: String,
        fragment_size: u32,
        acyclic: bool,
        complex_present: bool,
    }
    let trials: Vec<Trial> = (0..config.trials)
        .into_par_iter()
        .map(|t| -> Result<Trial> {
            let sample = sample_model(config, t);
            let (fragment, complex_present) = fragment_and_complex(config.n, &sample)?;
            let counts = count_short_cycles(config.n, &sample, config.max_cycle_len)?;
            let breakdown = classify_components(config.n, &sample);
            let total_vertices: u64 = breakdown.components.iter().map(|&(v, _)| v as u64).sum();
            assert_eq!(total_vertices, config.n as u64, "component vertex conservation");
            let acyclic = breakdown.unicyclic == 0 && breakdown.complex == 0;
            Ok(Trial {
                cycle_counts: counts.iter().map(|&(_, c)| c).collect(),
                fragment_code: fragment.code.clone(),
                fragment_size: fragment.size,
                acyclic,
                complex_present,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let nt = config.trials as u64;
    let acyclic_trials = trials.iter().filter(|t| t.acyclic).count() as u64;
    let complex_trials = trials.iter().filter(|t| t.complex_present).count() as u64;
    let mut fragment_freqs: BTreeMap<String, u64> = BTreeMap::new();
    for t in &trials {
        *fragment_freqs.entry(t.fragment_code.clone()).or_insert(0) += 1;
    }
    let mean_fragment_size =
        trials.iter().map(|t| t.fragment_size as f64).sum::<f64>() / nt as f64;
    let fragment_size_variance = trials
        .iter()
        .map(|t| {
            let d = t.fragment_size as f64 - mean_fragment_size;
            d * d
        })
        .sum::<f64>()
        / (nt as f64 - 1.0).max(1.0);

    let mut cycle_laws = Vec::new();
    for (i, &len) in lens.iter().enumerate() {
        let lambda = limits::cycle_lambda(&config.model, len)?;
        let mut hist: BTreeMap<u32, u64> = BTreeMap::new();
        let mut sum = 0u64;
        for t in &trials {
            *hist.entry(t.cycle_counts[i] as u32).or_insert(0) += 1;
            sum += t.cycle_counts[i];
        }
        let histogram: Vec<(u32, u64)> = hist.into_iter().collect();
        cycle_laws.push(CycleLawStats {
            len,
            lambda,
            mean: sum as f64 / nt as f64,
            tv_distance: stats::tv_distance_poisson(&histogram, nt, lambda),
            histogram,
        });
    }

    let cycle_covariance = if lens.len() >= 2 {
        let (a, b) = (0usize, 1usize);
        let ma = cycle_laws[a].mean;
        let mb = cycle_laws[b].mean;
        let cov = trials
            .iter()
            .map(|t| (t.cycle_counts[a] as f64 - ma) * (t.cycle_counts[b] as f64 - mb))
            .sum::<f64>()
            / (nt as f64 - 1.0).max(1.0);
        let se = (cycle_laws[a].lambda * cycle_laws[b].lambda / nt as f64).sqrt();
        Some(CovarianceStats {
            len_a: lens[a],
            len_b: lens[b],
            covariance: cov,
            standard_error: se,
            z: cov / se,
        })
    } else {
        None
    };

    let subcritical = config.model.is_subcritical();
    let (predicted_acyclic, acyclic_z) = if subcritical {
        let p0 = limits::acyclic_probability(&config.model)?;
        (
            Some(p0),
            Some(stats::fraction_z_score(acyclic_trials, nt, p0)),
        )
    } else {
        (None, None)
    };

    let fragment_chi_square = if subcritical {
        Some(fragment_chi_square(config, &fragment_freqs)?)
    } else {
        None
    };

    let trial_records = config.keep_trial_records.then(|| {
        trials
            .iter()
            .enumerate()
            .map(|(i, t)| TrialRecord {
                trial: i as u32,
                cycle_counts: lens.iter().copied().zip(t.cycle_counts.iter().copied()).collect(),
                fragment_code: t.fragment_code.clone(),
                acyclic: t.acyclic,
                complex_present: t.complex_present,
            })
            .collect()
    });

    Ok(SimResult {
        n: config.n,
        trials: config.trials,
        c: config.model.c,
        master_seed: config.master_seed,
        acyclic_trials,
        acyclic_fraction: acyclic_trials as f64 / nt as f64,
        predicted_acyclic,
        acyclic_z,
        cycle_laws,
        cycle_covariance,
        fragment_freqs,
        mean_fragment_size,
        fragment_size_variance,
        complex_trials,
        fragment_chi_square,
        trial_records,
    })
}

/// Prediction depth for the chi-square shape table.
fn prediction_depth(kind: ModelKind) -> u32 {
    match kind {
        ModelKind::Graph => 8,
        ModelKind::Hypergraph { .. } => 6,
    }
}

/// Pearson chi-square of the empirical fragment-shape frequencies against
/// the limiting law, pooling shapes below an expected count of 5 into an
/// `other` bin.
fn fragment_chi_square(
    config: &SampleConfig,
    freqs: &BTreeMap<String, u64>,
) -> Result<FragmentChiSquare> {
    let model = &config.model;
    let nt = config.trials as f64;
    let depth = prediction_depth(model.kind);
    let classes = crate::intervals::connected_classes(model.kind, depth, depth)?;
    let fragments = crate::fragment::enumerate_fragments(&classes, depth)?;
    let mut predicted: Vec<(String, f64)> = fragments
        .iter()
        .map(|f| {
            Ok((
                f.code.clone(),
                limits::shape_probability(model, f.size, &f.aut)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    predicted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    let mut bins: Vec<(String, f64, f64)> = Vec::new();
    let mut used_p = 0.0;
    let mut used_obs = 0u64;
    for (code, p) in predicted {
        let expected = p * nt;
        if expected < 5.0 {
            continue;
        }
        let observed = freqs.get(&code).copied().unwrap_or(0);
        bins.push((code, observed as f64, expected));
        used_p += p;
        used_obs += observed;
    }
    let other_expected = (1.0 - used_p) * nt;
    let other_observed = config.trials as u64 - used_obs;
    let mut downgraded = false;
    if other_expected >= 5.0 {
        bins.push(("other".to_string(), other_observed as f64, other_expected));
    } else if bins.len() < 2 {
        downgraded = true;
    }
    if bins.len() < 2 {
        // Not enough mass resolution; report a degenerate comparison.
        return Ok(FragmentChiSquare {
            statistic: 0.0,
            dof: 0,
            p_value: 1.0,
            bins,
            downgraded: true,
        });
    }
    let cs = stats::chi_square(
        &bins
            .iter()
            .map(|(_, o, e)| (*o, *e))
            .collect::<Vec<(f64, f64)>>(),
    );
    Ok(FragmentChiSquare {
        statistic: cs.statistic,
        dof: cs.dof,
        p_value: cs.p_value,
        bins,
        downgraded,
    })
}

impl SimResult {
    pub fn to_json(&self) -> JVal {
        let cycle_laws = JVal::Arr(
            self.cycle_laws
                .iter()
                .map(|cl| {
                    JVal::obj(vec![
                        ("len", JVal::UInt(cl.len as u64)),
                        ("lambda", JVal::Float(cl.lambda)),
                        ("mean", JVal::Float(cl.mean)),
                        ("tv_distance", JVal::Float(cl.tv_distance)),
                        (
                            "histogram",
                            JVal::Arr(
                                cl.histogram
                                    .iter()
                                    .map(|&(k, v)| {
                                        JVal::Arr(vec![JVal::UInt(k as u64), JVal::UInt(v)])
                                    })
                                    .collect(),
                            ),
                        ),
                    ])
                })
                .collect(),
        );
        let freqs = JVal::Obj(
            self.fragment_freqs
                .iter()
                .map(|(k, &v)| (k.clone(), JVal::UInt(v)))
                .collect(),
        );
        let mut fields = vec![
            ("n", JVal::UInt(self.n as u64)),
            ("trials", JVal::UInt(self.trials as u64)),
            ("c", JVal::Float(self.c)),
            ("seed", JVal::UInt(self.master_seed)),
            ("acyclic_trials", JVal::UInt(self.acyclic_trials)),
            ("acyclic_fraction", JVal::Float(self.acyclic_fraction)),
            (
                "predicted_acyclic",
                self.predicted_acyclic.map_or(JVal::Null, JVal::Float),
            ),
            ("acyclic_z", self.acyclic_z.map_or(JVal::Null, JVal::Float)),
            ("cycle_laws", cycle_laws),
            ("fragment_freqs", freqs),
            ("mean_fragment_size", JVal::Float(self.mean_fragment_size)),
            (
                "fragment_size_variance",
                JVal::Float(self.fragment_size_variance),
            ),
            ("complex_trials", JVal::UInt(self.complex_trials)),
        ];
        if let Some(cov) = &self.cycle_covariance {
            fields.push((
                "cycle_covariance",
                JVal::obj(vec![
                    ("len_a", JVal::UInt(cov.len_a as u64)),
                    ("len_b", JVal::UInt(cov.len_b as u64)),
                    ("covariance", JVal::Float(cov.covariance)),
                    ("standard_error", JVal::Float(cov.standard_error)),
                    ("z", JVal::Float(cov.z)),
                ]),
            ));
        }
        if let Some(cs) = &self.fragment_chi_square {
            fields.push((
                "fragment_chi_square",
                JVal::obj(vec![
                    ("statistic", JVal::Float(cs.statistic)),
                    ("dof", JVal::UInt(cs.dof as u64)),
                    ("p_value", JVal::Float(cs.p_value)),
                    ("downgraded", JVal::Bool(cs.downgraded)),
                    (
                        "bins",
                        JVal::Arr(
                            cs.bins
                                .iter()
                                .map(|(code, o, e)| {
                                    JVal::obj(vec![
                                        ("shape", JVal::str(code.clone())),
                                        ("observed", JVal::Float(*o)),
                                        ("expected", JVal::Float(*e)),
                                    ])
                                })
                                .collect(),
                        ),
                    ),
                ]),
            ));
        }
        JVal::Obj(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    }

    /// Per-trial CSV dump for debugging.
    pub fn trials_csv(&self) -> Option<String> {
        let records = self.trial_records.as_ref()?;
        let lens: Vec<u32> = records
            .first()
            .map(|r| r.cycle_counts.iter().map(|&(l, _)| l).collect())
            .unwrap_or_default();
        let mut out = String::from("trial,acyclic,complex,fragment");
        for l in &lens {
            out.push_str(&format!(",cycles_{l}"));
        }
        out.push('\n');
        for r in records {
            out.push_str(&format!(
                "{},{},{},{}",
                r.trial, r.acyclic, r.complex_present, r.fragment_code
            ));
            for &(_, c) in &r.cycle_counts {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        Some(out)
    }
}
