//! Graph representation, edge-list ingestion and structural statistics.

mod csr;
mod edge_list;

use std::fmt;

pub use csr::{build_csr, CsrGraph};
pub use edge_list::{parse_edge_list, Edge, EdgeList, ValidationReport};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphStats {
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub avg_degree: f64,
}

pub fn graph_stats<T: Scalar>(g: &CsrGraph<T>) -> GraphStats {
    let n = g.n();
    let max_degree = (0..n).map(|v| g.degree(v)).max().unwrap_or(0);
    let avg_degree = if n == 0 { 0.0 } else { 2.0 * g.m() as f64 / n as f64 };
    GraphStats { n, m: g.m(), max_degree, avg_degree }
}

impl fmt::Display for GraphStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} max_degree={} avg_degree={}",
            self.n,
            self.m,
            self.max_degree,
            short_decimal(self.avg_degree)
        )
    }
}

/// Up to four decimals, trailing zeros trimmed but at least one kept.
pub(crate) fn short_decimal(x: f64) -> String {
    let s = format!("{x:.4}");
    let trimmed = s.trim_end_matches('0');
    if trimmed.ends_with('.') {
        format!("{trimmed}0")
    } else {
        trimmed.to_string()
    }
}
