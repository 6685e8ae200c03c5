//! Tab-separated score output keyed by original vertex ids.

use std::fmt::Write as _;

use crate::graph::CsrGraph;
use crate::scalar::Scalar;

/// `original_id<TAB>score` per vertex, ascending by original id.
pub fn node_scores_tsv<T: Scalar>(g: &CsrGraph<T>, node_bc: &[T]) -> String {
    let mut rows: Vec<(u64, T)> = (0..g.n()).map(|v| (g.original_id(v), node_bc[v])).collect();
    rows.sort_by_key(|&(id, _)| id);
    let mut out = String::new();
    for (id, score) in rows {
        let _ = writeln!(out, "{id}\t{score}");
    }
    out
}

/// `u<TAB>v<TAB>score` per undirected edge with `u < v` in original ids,
/// ascending by `(u, v)`.
pub fn edge_scores_tsv<T: Scalar>(g: &CsrGraph<T>, edge_bc: &[T]) -> String {
    let mut rows: Vec<(u64, u64, T)> = (0..g.m())
        .map(|e| {
            let (a, b) = g.endpoints(e);
            let (a, b) = (g.original_id(a), g.original_id(b));
            (a.min(b), a.max(b), edge_bc[e])
        })
        .collect();
    rows.sort_by_key(|&(u, v, _)| (u, v));
    let mut out = String::new();
    for (u, v, score) in rows {
        let _ = writeln!(out, "{u}\t{v}\t{score}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_csr, parse_edge_list};
    use crate::oracle::{brandes_sequential, BcOptions};

    #[test]
    fn sorted_by_original_id() {
        let g = build_csr(&parse_edge_list::<f64, _>("20 10\n10 30\n".as_bytes(), 1.0).unwrap()).unwrap();
        let r = brandes_sequential(&g, &BcOptions::default().with_edge_bc(true));
        assert_eq!(node_scores_tsv(&g, &r.node_bc), "10\t2\n20\t0\n30\t0\n");
        assert_eq!(edge_scores_tsv(&g, r.edge_bc.as_ref().unwrap()), "10\t20\t4\n10\t30\t4\n");
    }
}
