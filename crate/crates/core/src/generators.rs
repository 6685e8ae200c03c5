//! Seeded synthetic graphs: Erdős–Rényi G(n, m), R-MAT style Kronecker
//! descent, and uniform integer weights.
//!
//! Topology and weights draw from separate ChaCha streams of the same seed,
//! so either can be regenerated independently.

use std::collections::HashSet;
use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::EdgeList;
use crate::scalar::Scalar;

const TOPOLOGY_STREAM: u64 = 1;
const WEIGHT_STREAM: u64 = 2;
const SOURCE_STREAM: u64 = 3;

/// Quadrant weights `[a, b, c, d]` for top-left, top-right, bottom-left,
/// bottom-right.
pub const DEFAULT_INITIATOR: [f64; 4] = [0.57, 0.19, 0.19, 0.05];

/// Kronecker samples allowed per requested edge before giving up.
pub const KRONECKER_RETRY_FACTOR: usize = 32;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn edge_target(n: u64, avg_degree: f64) -> Result<u64> {
    if !avg_degree.is_finite() || avg_degree < 0.0 {
        return Err(Error::InvalidArgument(format!("average degree must be non-negative, got {avg_degree}")));
    }
    Ok((n as f64 * avg_degree / 2.0).round() as u64)
}

/// Uniform graph with exactly `round(n * avg_degree / 2)` distinct edges,
/// sampled without replacement from all unordered pairs. Weights are 1.
pub fn gen_er<T: Scalar>(n: usize, avg_degree: f64, seed: u64) -> Result<EdgeList<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("ER graph needs at least one vertex".into()));
    }
    let m = edge_target(n as u64, avg_degree)?;
    let pairs = n as u64 * (n as u64 - 1) / 2;
    if m > pairs {
        return Err(Error::InvalidArgument(format!(
            "{m} edges requested but only {pairs} vertex pairs exist for n={n}"
        )));
    }
    let mut rng = rng_for(seed, TOPOLOGY_STREAM);
    let mut edges: Vec<(u64, u64)> =
        index::sample(&mut rng, pairs as usize, m as usize).into_iter().map(|k| unrank_pair(k as u64)).collect();
    edges.sort_unstable();
    let mut list = EdgeList::new();
    for (u, v) in edges {
        list.push(u, v, T::one());
    }
    Ok(list)
}

/// Maps `k` in `[0, n(n-1)/2)` to the pair `(j, i)` with `j < i` and
/// `k = i(i-1)/2 + j`.
fn unrank_pair(k: u64) -> (u64, u64) {
    let mut i = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0) as u64;
    while i * (i - 1) / 2 > k {
        i -= 1;
    }
    while (i + 1) * i / 2 <= k {
        i += 1;
    }
    (k - i * (i - 1) / 2, i)
}

/// Kronecker graph on `2^scale` vertices by recursive quadrant descent.
///
/// Draws `round(n * avg_degree / 2)` cells of the adjacency matrix; each
/// draw makes `scale` weighted quadrant choices. Self-loops and repeats are
/// redrawn, up to [`KRONECKER_RETRY_FACTOR`] draws per requested edge; if that
/// runs out the list is shorter than requested and a warning is logged.
pub fn gen_kronecker<T: Scalar>(scale: u32, avg_degree: f64, seed: u64, initiator: [f64; 4]) -> Result<EdgeList<T>> {
    if scale == 0 || scale > 40 {
        return Err(Error::InvalidArgument(format!("Kronecker scale must be in 1..=40, got {scale}")));
    }
    if initiator.iter().any(|p| !(0.0..=1.0).contains(p)) || initiator.iter().sum::<f64>() <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "initiator entries must lie in [0, 1] and not all be zero: {initiator:?}"
        )));
    }
    let n = 1u64 << scale;
    let m = edge_target(n, avg_degree)? as usize;
    let total: f64 = initiator.iter().sum();
    let (a, b, c) = (initiator[0] / total, initiator[1] / total, initiator[2] / total);
    let (ab, abc) = (a + b, a + b + c);

    let mut rng = rng_for(seed, TOPOLOGY_STREAM);
    let mut seen: HashSet<(u64, u64)> = HashSet::with_capacity(m);
    let mut list = EdgeList::new();
    let budget = m.saturating_mul(KRONECKER_RETRY_FACTOR);
    let mut draws = 0usize;
    while list.len() < m && draws < budget {
        draws += 1;
        let (mut row, mut col) = (0u64, 0u64);
        for _ in 0..scale {
            let r: f64 = rng.gen();
            let (dr, dc) = if r < a {
                (0, 0)
            } else if r < ab {
                (0, 1)
            } else if r < abc {
                (1, 0)
            } else {
                (1, 1)
            };
            row = (row << 1) | dr;
            col = (col << 1) | dc;
        }
        if row == col {
            continue;
        }
        let key = (row.min(col), row.max(col));
        if seen.insert(key) {
            list.push(key.0, key.1, T::one());
        }
    }
    if list.len() < m {
        log::warn!(
            "kronecker scale={scale}: retry budget exhausted after {draws} draws, produced {} of {m} edges",
            list.len()
        );
    }
    Ok(list)
}

/// Replaces every weight with an independent uniform integer in `[lo, hi]`.
pub fn assign_weights<T: Scalar>(edges: &EdgeList<T>, lo: u64, hi: u64, seed: u64) -> Result<EdgeList<T>> {
    if lo < 1 || hi < lo {
        return Err(Error::InvalidArgument(format!("weight range needs 1 <= lo <= hi, got [{lo}, {hi}]")));
    }
    let mut rng = rng_for(seed, WEIGHT_STREAM);
    let mut out = edges.clone();
    for e in &mut out.entries {
        e.w = T::from_u64(rng.gen_range(lo..=hi)).unwrap_or_else(T::infinity);
    }
    Ok(out)
}

/// `k` distinct source vertices out of `0..n`, sorted. Returns all of them
/// when `k >= n`.
pub fn sample_sources(n: usize, k: usize, seed: u64) -> Vec<usize> {
    if k >= n {
        return (0..n).collect();
    }
    let mut rng = rng_for(seed, SOURCE_STREAM);
    let mut picked = index::sample(&mut rng, n, k).into_vec();
    picked.sort_unstable();
    picked
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Er { n: usize },
    Kronecker { scale: u32, initiator: [f64; 4] },
}

/// Full description of a synthetic input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub avg_degree: f64,
    pub seed: u64,
    pub weight_range: (u64, u64),
}

impl GenSpec {
    pub fn er(n: usize, avg_degree: f64, seed: u64) -> Self {
        Self { model: Model::Er { n }, avg_degree, seed, weight_range: (1, 10) }
    }

    pub fn kronecker(scale: u32, avg_degree: f64, seed: u64) -> Self {
        Self {
            model: Model::Kronecker { scale, initiator: DEFAULT_INITIATOR },
            avg_degree,
            seed,
            weight_range: (1, 10),
        }
    }

    pub fn with_weights(mut self, lo: u64, hi: u64) -> Self {
        self.weight_range = (lo, hi);
        self
    }

    pub fn nodes(&self) -> u64 {
        match self.model {
            Model::Er { n } => n as u64,
            Model::Kronecker { scale, .. } => 1u64 << scale.min(63),
        }
    }

    /// Topology from the model, then weights from the weight stream.
    pub fn generate<T: Scalar>(&self) -> Result<EdgeList<T>> {
        let (lo, hi) = self.weight_range;
        if lo < 1 || hi < lo {
            return Err(Error::InvalidArgument(format!("weight range needs 1 <= lo <= hi, got [{lo}, {hi}]")));
        }
        let topology = match self.model {
            Model::Er { n } => gen_er(n, self.avg_degree, self.seed)?,
            Model::Kronecker { scale, initiator } => gen_kronecker(scale, self.avg_degree, self.seed, initiator)?,
        };
        assign_weights(&topology, lo, hi, self.seed)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.model {
            Model::Er { n } => write!(f, "model=er nodes={n}")?,
            Model::Kronecker { scale, initiator } => write!(
                f,
                "model=kronecker scale={scale} nodes={} initiator={},{},{},{}",
                1u64 << scale.min(63),
                initiator[0],
                initiator[1],
                initiator[2],
                initiator[3]
            )?,
        }
        write!(
            f,
            " avg_degree={} seed={} weights={}..={}",
            self.avg_degree, self.seed, self.weight_range.0, self.weight_range.1
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, graph_stats};

    #[test]
    fn source_samples() {
        let a = sample_sources(100, 10, 3);
        assert_eq!(a.len(), 10);
        assert!(a.windows(2).all(|w| w[0] < w[1]) && a[9] < 100);
        assert_eq!(a, sample_sources(100, 10, 3));
        assert_ne!(a, sample_sources(100, 10, 4));
        assert_eq!(sample_sources(5, 9, 3), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn unrank_is_a_bijection() {
        let n = 40u64;
        let mut seen = HashSet::new();
        for k in 0..n * (n - 1) / 2 {
            let (j, i) = unrank_pair(k);
            assert!(j < i && i < n);
            assert!(seen.insert((j, i)));
        }
    }

    #[test]
    fn er_edge_counts() {
        assert_eq!(gen_er::<f64>(10, 0.0, 3).unwrap().len(), 0);
        let el = gen_er::<f64>(16, 4.0, 9).unwrap();
        assert_eq!(el.len(), 32);
        let set: HashSet<_> = el.entries.iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(set.len(), 32);
        assert!(el.entries.iter().all(|e| e.u < e.v && e.v < 16));
        // complete graph is reachable exactly
        assert_eq!(gen_er::<f64>(5, 4.0, 1).unwrap().len(), 10);
    }

    #[test]
    fn er_rejects_impossible_requests() {
        assert!(gen_er::<f64>(5, 5.0, 1).is_err());
        assert!(gen_er::<f64>(0, 1.0, 1).is_err());
        assert!(gen_er::<f64>(5, -1.0, 1).is_err());
    }

    #[test]
    fn er_is_deterministic() {
        assert_eq!(gen_er::<f64>(200, 6.0, 42).unwrap(), gen_er::<f64>(200, 6.0, 42).unwrap());
        assert_ne!(gen_er::<f64>(200, 6.0, 42).unwrap(), gen_er::<f64>(200, 6.0, 43).unwrap());
    }

    #[test]
    fn er_degree_dispersion_is_poisson_like() {
        let el = gen_er::<f64>(1 << 12, 32.0, 2024).unwrap();
        let g = build_csr(&el).unwrap();
        let n = 1usize << 12;
        let degrees: Vec<f64> =
            (0..g.n()).map(|v| g.degree(v) as f64).chain(std::iter::repeat_n(0.0, n - g.n())).collect();
        let mean = degrees.iter().sum::<f64>() / n as f64;
        let var = degrees.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 32.0).abs() < 1e-9);
        assert!((var - mean).abs() <= 0.25 * mean, "variance {var} vs mean {mean}");
    }

    #[test]
    fn kronecker_shape() {
        let el = gen_kronecker::<f64>(4, 4.0, 5, DEFAULT_INITIATOR).unwrap();
        assert!(el.entries.iter().all(|e| e.u < 16 && e.v < 16 && e.u < e.v));
        assert!(el.len() <= 32);
        assert_eq!(el, gen_kronecker::<f64>(4, 4.0, 5, DEFAULT_INITIATOR).unwrap());
        let big = gen_kronecker::<f64>(10, 8.0, 5, DEFAULT_INITIATOR).unwrap();
        assert_eq!(big.len(), 4096);
    }

    #[test]
    fn kronecker_budget_stops_impossible_requests() {
        // 4 vertices hold at most 6 edges
        let el = gen_kronecker::<f64>(2, 10.0, 1, DEFAULT_INITIATOR).unwrap();
        assert!(el.len() <= 6);
    }

    #[test]
    fn kronecker_rejects_bad_parameters() {
        assert!(gen_kronecker::<f64>(0, 4.0, 1, DEFAULT_INITIATOR).is_err());
        assert!(gen_kronecker::<f64>(4, 4.0, 1, [1.5, 0.0, 0.0, 0.0]).is_err());
        assert!(gen_kronecker::<f64>(4, 4.0, 1, [0.0; 4]).is_err());
    }

    #[test]
    fn kronecker_is_heavy_tailed() {
        let el = gen_kronecker::<f64>(14, 16.0, 11, DEFAULT_INITIATOR).unwrap();
        let s = graph_stats(&build_csr(&el).unwrap());
        let avg = 2.0 * el.len() as f64 / (1u64 << 14) as f64;
        assert!(s.max_degree as f64 > 4.0 * avg, "max {} avg {avg}", s.max_degree);

        let er = graph_stats(&build_csr(&gen_er::<f64>(1 << 14, 16.0, 11).unwrap()).unwrap());
        assert!(s.max_degree > 4 * er.max_degree, "kron {} er {}", s.max_degree, er.max_degree);
    }

    #[test]
    fn weights_in_range() {
        let el = gen_er::<f64>(1000, 200.0, 3).unwrap();
        assert_eq!(el.len(), 100_000);
        let w = assign_weights(&el, 1, 10, 77).unwrap();
        assert!(w.entries.iter().all(|e| e.w >= 1.0 && e.w <= 10.0 && e.w.fract() == 0.0));
        let mean = w.entries.iter().map(|e| e.w).sum::<f64>() / w.len() as f64;
        assert!((5.4..=5.6).contains(&mean), "mean {mean}");
        assert_eq!(w, assign_weights(&el, 1, 10, 77).unwrap());
        let ones = assign_weights(&el, 1, 1, 5).unwrap();
        assert!(ones.entries.iter().all(|e| e.w == 1.0));
        assert!(assign_weights(&el, 0, 3, 1).is_err());
        assert!(assign_weights(&el, 4, 3, 1).is_err());
    }

    #[test]
    fn spec_generation_and_header() {
        let spec = GenSpec::er(16, 4.0, 7);
        let el: EdgeList<f64> = spec.generate().unwrap();
        assert_eq!(el.len(), 32);
        assert_eq!(spec.to_string(), "model=er nodes=16 avg_degree=4 seed=7 weights=1..=10");
        let k = GenSpec::kronecker(4, 4.0, 7);
        assert_eq!(k.nodes(), 16);
        assert!(GenSpec::er(16, 4.0, 7).with_weights(3, 2).generate::<f64>().is_err());
    }
}
