//! Betweenness centrality for weighted undirected graphs.
//!
//! - [`graph`]: CSR storage, edge-list parsing, structural statistics.
//! - [`oracle`]: sequential Brandes (binary-heap Dijkstra) and a brute-force
//!   pair-dependency check.
//! - [`engine`]: frontier-parallel Brandes with four scheduling strategies.
//! - [`generators`]: Erdős–Rényi and Kronecker graphs with integer weights.
//! - [`bench`]: timed strategy comparisons and CSV output.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`.

pub mod bench;
pub mod engine;
pub mod error;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod output;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Graph = graph::CsrGraph<f64>;
pub type Graph32 = graph::CsrGraph<f32>;
pub type EdgeList = graph::EdgeList<f64>;
pub type BcResult = oracle::BcResult<f64>;
pub type BcOptions = oracle::BcOptions<f64>;
pub type EngineConfig = engine::EngineConfig<f64>;
pub type TraversalState = engine::TraversalState<f64>;
