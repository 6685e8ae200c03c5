//! Sequential Brandes betweenness with binary-heap Dijkstra, plus a
//! brute-force pair-dependency summation used as an independent check.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::scalar::Scalar;

/// Score convention. `Raw` sums dependencies over ordered source/target
/// pairs; `Halved` divides by two to count each unordered pair once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    #[default]
    Raw,
    Halved,
}

/// Options shared by every betweenness routine in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcOptions<T> {
    pub edge_bc: bool,
    pub normalization: Normalization,
    /// Relative tolerance for "is this a shortest-path edge" comparisons.
    /// Zero means exact floating equality.
    pub tie_tolerance: T,
}

impl<T: Scalar> Default for BcOptions<T> {
    fn default() -> Self {
        Self { edge_bc: false, normalization: Normalization::Raw, tie_tolerance: T::zero() }
    }
}

impl<T: Scalar> BcOptions<T> {
    pub fn with_edge_bc(mut self, on: bool) -> Self {
        self.edge_bc = on;
        self
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn with_tie_tolerance(mut self, rel: T) -> Self {
        self.tie_tolerance = rel;
        self
    }
}

/// Suggested tie tolerance for real-valued weights.
pub const REAL_WEIGHT_TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct BcResult<T> {
    pub node_bc: Vec<T>,
    pub edge_bc: Option<Vec<T>>,
    /// Settlement levels per processed source (indexed by dense vertex id;
    /// zero for vertices that were not used as a source).
    pub depth_per_source: Option<Vec<usize>>,
    pub elapsed: Duration,
}

impl<T: Scalar> BcResult<T> {
    pub(crate) fn empty(n: usize, m: usize, edge_bc: bool) -> Self {
        Self {
            node_bc: vec![T::zero(); n],
            edge_bc: edge_bc.then(|| vec![T::zero(); m]),
            depth_per_source: None,
            elapsed: Duration::ZERO,
        }
    }

    pub(crate) fn apply(&mut self, normalization: Normalization) {
        if normalization == Normalization::Halved {
            let two = T::one() + T::one();
            self.node_bc.iter_mut().for_each(|x| *x = *x / two);
            if let Some(e) = self.edge_bc.as_mut() {
                e.iter_mut().for_each(|x| *x = *x / two);
            }
        }
    }

    /// Mean of `depth_per_source` over the given sources.
    pub fn avg_depth(&self, sources: &[usize]) -> Option<f64> {
        let depths = self.depth_per_source.as_ref()?;
        if sources.is_empty() {
            return None;
        }
        let total: usize = sources.iter().map(|&s| depths[s]).sum();
        Some(total as f64 / sources.len() as f64)
    }
}

/// Checks `|a - b| <= rel * max(|a|, |b|, 1)` element-wise and reports the
/// first violation.
pub fn compare_scores<T: Scalar>(a: &[T], b: &[T], rel: f64) -> std::result::Result<(), String> {
    if a.len() != b.len() {
        return Err(format!("length {} vs {}", a.len(), b.len()));
    }
    for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
        let (x, y) = (x.to_f64_lossy(), y.to_f64_lossy());
        let scale = x.abs().max(y.abs()).max(1.0);
        if (x - y).is_nan() || (x - y).abs() > rel * scale {
            return Err(format!("index {i}: {x} vs {y} (rel tol {rel:e})"));
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct HeapEntry<T> {
    dist: T,
    vertex: usize,
}

impl<T: Scalar> PartialEq for HeapEntry<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.partial_cmp(&self.dist).unwrap_or(Ordering::Equal).then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Per-source scratch for the heap-based traversal.
struct SequentialScratch<T> {
    dist: Vec<T>,
    sigma: Vec<T>,
    delta: Vec<T>,
    settled: Vec<bool>,
    order: Vec<usize>,
    heap: BinaryHeap<HeapEntry<T>>,
}

impl<T: Scalar> SequentialScratch<T> {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![T::infinity(); n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
            settled: vec![false; n],
            order: Vec::with_capacity(n),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = T::infinity();
            self.sigma[v] = T::zero();
            self.delta[v] = T::zero();
            self.settled[v] = false;
        }
        // vertices reached but never settled cannot exist once the heap drains
        self.order.clear();
        self.heap.clear();
    }

    fn shortest_paths(&mut self, g: &CsrGraph<T>, s: usize, tol: T) {
        self.dist[s] = T::zero();
        self.sigma[s] = T::one();
        self.heap.push(HeapEntry { dist: T::zero(), vertex: s });
        while let Some(HeapEntry { dist, vertex: v }) = self.heap.pop() {
            if self.settled[v] || dist > self.dist[v] {
                continue;
            }
            self.settled[v] = true;
            self.order.push(v);
            let (dv, sv) = (self.dist[v], self.sigma[v]);
            for (u, w, _) in g.neighbors(v) {
                if self.settled[u] {
                    continue;
                }
                let alt = dv + w;
                if T::approx_eq(alt, self.dist[u], tol) {
                    self.sigma[u] += sv;
                } else if alt < self.dist[u] {
                    self.dist[u] = alt;
                    self.sigma[u] = sv;
                    self.heap.push(HeapEntry { dist: alt, vertex: u });
                }
            }
        }
    }

    fn accumulate(&mut self, g: &CsrGraph<T>, s: usize, tol: T, bc: &mut [T], edge_bc: Option<&mut [T]>) {
        let mut edge_bc = edge_bc;
        for &w in self.order.iter().rev() {
            let (dw, sw) = (self.dist[w], self.sigma[w]);
            let mut acc = T::zero();
            for (v, weight, e) in g.neighbors(w) {
                if T::approx_eq(self.dist[v], dw + weight, tol) {
                    let c = sw / self.sigma[v] * (T::one() + self.delta[v]);
                    acc += c;
                    if let Some(eb) = edge_bc.as_deref_mut() {
                        eb[e] += c;
                    }
                }
            }
            self.delta[w] = acc;
            if w != s {
                bc[w] += acc;
            }
        }
    }
}

/// Brandes betweenness over every source.
pub fn brandes_sequential<T: Scalar>(g: &CsrGraph<T>, opts: &BcOptions<T>) -> BcResult<T> {
    let sources: Vec<usize> = (0..g.n()).collect();
    brandes_sequential_sources(g, &sources, opts)
}

/// Brandes betweenness restricted to the given sources (contributions of
/// each listed source are summed; duplicates count twice).
pub fn brandes_sequential_sources<T: Scalar>(g: &CsrGraph<T>, sources: &[usize], opts: &BcOptions<T>) -> BcResult<T> {
    let start = Instant::now();
    let mut result = BcResult::empty(g.n(), g.m(), opts.edge_bc);
    let mut scratch = SequentialScratch::new(g.n());
    for &s in sources {
        assert!(s < g.n(), "source {s} out of range");
        scratch.reset();
        scratch.shortest_paths(g, s, opts.tie_tolerance);
        scratch.accumulate(g, s, opts.tie_tolerance, &mut result.node_bc, result.edge_bc.as_deref_mut());
    }
    result.apply(opts.normalization);
    result.elapsed = start.elapsed();
    result
}

/// Distances and path counts from one source, via the heap traversal.
pub fn shortest_path_counts<T: Scalar>(g: &CsrGraph<T>, s: usize, tie_tolerance: T) -> (Vec<T>, Vec<T>) {
    let mut scratch = SequentialScratch::new(g.n());
    scratch.shortest_paths(g, s, tie_tolerance);
    (scratch.dist, scratch.sigma)
}

/// Largest graph [`brute_force_bc`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 300;

/// All-pairs betweenness by explicit pair-dependency summation: O(n^3).
///
/// Distances come from an O(n^2) array-scan Dijkstra per source, path counts
/// from a pass in distance order, and every ordered pair `(s, t)` adds
/// `sigma(s,v) * sigma(v,t) / sigma(s,t)` to each `v` on a shortest path. Shares
/// no code with [`brandes_sequential`]. Path-length equalities use a small
/// relative tolerance since sums are formed along different chains.
pub fn brute_force_bc<T: Scalar>(g: &CsrGraph<T>, opts: &BcOptions<T>) -> Result<BcResult<T>> {
    let n = g.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::GraphTooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let start = Instant::now();
    let tol = T::from_f64_lossy(1e-12).max(T::epsilon() * T::from_f64_lossy(16.0));
    let tables: Vec<(Vec<T>, Vec<T>)> = (0..n).map(|s| array_dijkstra(g, s, tol)).collect();
    let mut result = BcResult::empty(n, g.m(), opts.edge_bc);
    let on_path = |a: T, b: T, total: T| T::approx_eq(a + b, total, tol);

    for s in 0..n {
        let (ds, ss) = &tables[s];
        for t in 0..n {
            if t == s || !ds[t].is_finite() {
                continue;
            }
            let total_paths = ss[t];
            for v in 0..n {
                if v == s || v == t {
                    continue;
                }
                let (dv, sv) = &tables[v];
                if ds[v].is_finite() && on_path(ds[v], dv[t], ds[t]) {
                    result.node_bc[v] += ss[v] * sv[t] / total_paths;
                }
            }
            if let Some(eb) = result.edge_bc.as_mut() {
                for (e, slot) in eb.iter_mut().enumerate() {
                    let (a, b) = g.endpoints(e);
                    let w = g.edge_weight(e);
                    for (x, y) in [(a, b), (b, a)] {
                        let dy = &tables[y].0;
                        let sy = &tables[y].1;
                        if ds[x].is_finite() && on_path(ds[x] + w, dy[t], ds[t]) {
                            *slot += ss[x] * sy[t] / total_paths;
                        }
                    }
                }
            }
        }
    }
    result.apply(opts.normalization);
    result.elapsed = start.elapsed();
    Ok(result)
}

fn array_dijkstra<T: Scalar>(g: &CsrGraph<T>, s: usize, tol: T) -> (Vec<T>, Vec<T>) {
    let n = g.n();
    let mut dist = vec![T::infinity(); n];
    let mut done = vec![false; n];
    dist[s] = T::zero();
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !done[v] && dist[v].is_finite())
            .min_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap_or(Ordering::Equal));
        let Some(v) = next else { break };
        done[v] = true;
        for (u, w, _) in g.neighbors(v) {
            if dist[v] + w < dist[u] {
                dist[u] = dist[v] + w;
            }
        }
    }
    let mut by_distance: Vec<usize> = (0..n).filter(|&v| dist[v].is_finite()).collect();
    by_distance.sort_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap_or(Ordering::Equal));
    let mut sigma = vec![T::zero(); n];
    sigma[s] = T::one();
    for &t in by_distance.iter().skip(1) {
        sigma[t] = g
            .neighbors(t)
            .filter(|&(p, w, _)| dist[p].is_finite() && T::approx_eq(dist[p] + w, dist[t], tol))
            .map(|(p, _, _)| sigma[p])
            .sum();
    }
    (dist, sigma)
}
