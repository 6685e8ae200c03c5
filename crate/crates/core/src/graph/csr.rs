//! Compressed sparse row storage for undirected weighted graphs.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::ops::Range;

use super::edge_list::{Edge, EdgeList};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Undirected weighted graph in CSR form.
///
/// Every undirected edge `{u, v}` occupies two directed slots, one in the row
/// of `u` and one in the row of `v`; both carry the same weight and the same
/// canonical edge index in `[0, m)`. Vertex ids are dense in `[0, n)`; the
/// original ids of the input are retained for output.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrGraph<T> {
    offsets: Vec<usize>,
    adjacency: Vec<usize>,
    weights: Vec<T>,
    edge_id: Vec<usize>,
    min_incident_weight: Vec<T>,
    endpoints: Vec<(usize, usize)>,
    original_ids: Vec<u64>,
    merged_duplicates: usize,
}

/// Builds a graph from a validated edge list.
///
/// Raw ids are compacted to `[0, n)` in order of first appearance. Repeated
/// undirected edges collapse to one edge carrying the minimum weight; the
/// number of collapsed entries is kept in [`CsrGraph::merged_duplicates`].
pub fn build_csr<T: Scalar>(edges: &EdgeList<T>) -> Result<CsrGraph<T>> {
    let mut dense: HashMap<u64, usize> = HashMap::new();
    let mut original_ids = Vec::new();
    let mut intern = |raw: u64| -> usize {
        *dense.entry(raw).or_insert_with(|| {
            original_ids.push(raw);
            original_ids.len() - 1
        })
    };
    let mut triples = Vec::with_capacity(edges.len());
    for (i, &Edge { u, v, w }) in edges.entries.iter().enumerate() {
        check_weight(w, i + 1)?;
        if u == v {
            continue;
        }
        let (a, b) = (intern(u), intern(v));
        triples.push((a, b, w));
    }
    Ok(CsrGraph::assemble(original_ids, triples))
}

fn check_weight<T: Scalar>(w: T, line: usize) -> Result<()> {
    if w.is_finite() && w > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveWeight { line, weight: w.to_f64_lossy() })
    }
}

impl<T: Scalar> CsrGraph<T> {
    /// Builds a graph on the dense vertex set `[0, n)` (isolated vertices
    /// kept). Self-loops are dropped and duplicates merged as in
    /// [`build_csr`].
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut triples = Vec::new();
        for (i, (u, v, w)) in edges.into_iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge {} ({u}, {v}) out of range for {n} vertices", i + 1)));
            }
            check_weight(w, i + 1)?;
            if u != v {
                triples.push((u, v, w));
            }
        }
        Ok(Self::assemble((0..n as u64).collect(), triples))
    }

    fn assemble(original_ids: Vec<u64>, triples: Vec<(usize, usize, T)>) -> Self {
        let n = original_ids.len();
        let mut canonical: HashMap<(usize, usize), usize> = HashMap::with_capacity(triples.len());
        let mut endpoints = Vec::with_capacity(triples.len());
        let mut edge_weight: Vec<T> = Vec::with_capacity(triples.len());
        let mut merged_duplicates = 0;
        for (u, v, w) in triples {
            let key = (u.min(v), u.max(v));
            match canonical.entry(key) {
                Entry::Occupied(slot) => {
                    merged_duplicates += 1;
                    let cur = &mut edge_weight[*slot.get()];
                    if w < *cur {
                        *cur = w;
                    }
                }
                Entry::Vacant(slot) => {
                    slot.insert(endpoints.len());
                    endpoints.push(key);
                    edge_weight.push(w);
                }
            }
        }

        let m = endpoints.len();
        let mut offsets = vec![0usize; n + 1];
        for &(u, v) in &endpoints {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor = offsets[..n].to_vec();
        let mut adjacency = vec![0usize; 2 * m];
        let mut weights = vec![T::zero(); 2 * m];
        let mut edge_id = vec![0usize; 2 * m];
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            for (from, to) in [(u, v), (v, u)] {
                let slot = cursor[from];
                cursor[from] += 1;
                adjacency[slot] = to;
                weights[slot] = edge_weight[e];
                edge_id[slot] = e;
            }
        }
        let min_incident_weight =
            (0..n).map(|v| weights[offsets[v]..offsets[v + 1]].iter().copied().fold(T::infinity(), T::min)).collect();

        Self { offsets, adjacency, weights, edge_id, min_incident_weight, endpoints, original_ids, merged_duplicates }
    }

    /// Vertex count.
    #[inline]
    pub fn n(&self) -> usize {
        self.original_ids.len()
    }

    /// Undirected edge count.
    #[inline]
    pub fn m(&self) -> usize {
        self.endpoints.len()
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Directed slot range of `v`'s row.
    #[inline]
    pub fn slots(&self, v: usize) -> Range<usize> {
        self.offsets[v]..self.offsets[v + 1]
    }

    #[inline]
    pub fn neighbor(&self, slot: usize) -> usize {
        self.adjacency[slot]
    }

    #[inline]
    pub fn weight(&self, slot: usize) -> T {
        self.weights[slot]
    }

    #[inline]
    pub fn edge_id(&self, slot: usize) -> usize {
        self.edge_id[slot]
    }

    /// `(neighbor, weight, edge id)` for every slot of `v`.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, T, usize)> + '_ {
        self.slots(v).map(move |s| (self.adjacency[s], self.weights[s], self.edge_id[s]))
    }

    /// Lightest incident edge weight of `v`, infinity when `v` is isolated.
    #[inline]
    pub fn min_incident_weight(&self, v: usize) -> T {
        self.min_incident_weight[v]
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn adjacency(&self) -> &[usize] {
        &self.adjacency
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn edge_ids(&self) -> &[usize] {
        &self.edge_id
    }

    pub fn min_incident_weights(&self) -> &[T] {
        &self.min_incident_weight
    }

    /// Dense endpoints `(u, v)` with `u < v` of canonical edge `e`.
    #[inline]
    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.endpoints[e]
    }

    /// Weight of canonical edge `e`.
    pub fn edge_weight(&self, e: usize) -> T {
        let (u, v) = self.endpoints[e];
        self.neighbors(u).find(|&(x, _, _)| x == v).map(|(_, w, _)| w).expect("canonical edge present in adjacency")
    }

    /// Original (pre-compaction) id of dense vertex `v`.
    #[inline]
    pub fn original_id(&self, v: usize) -> u64 {
        self.original_ids[v]
    }

    pub fn original_ids(&self) -> &[u64] {
        &self.original_ids
    }

    /// Number of input entries that were folded into an existing edge.
    pub fn merged_duplicates(&self) -> usize {
        self.merged_duplicates
    }

    /// Re-serializes to an edge list in canonical edge order using original
    /// ids.
    pub fn to_edge_list(&self) -> EdgeList<T> {
        let mut list = EdgeList::new();
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            list.push(self.original_ids[u], self.original_ids[v], self.edge_weight(e));
        }
        list
    }

    /// Copy of the graph with every weight set to `w`.
    pub fn with_uniform_weight(&self, w: T) -> Result<Self> {
        check_weight(w, 0)?;
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|x| *x = w);
        for v in 0..g.n() {
            if g.degree(v) > 0 {
                g.min_incident_weight[v] = w;
            }
        }
        Ok(g)
    }
}
