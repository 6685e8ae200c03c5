//! Frontier-parallel weighted betweenness.
//!
//! Each source runs a level-synchronous Dijkstra: relax the frontier, compute
//! the threshold `min(d(u) + lightest edge of u)` over unsettled `u`, settle
//! every vertex strictly below it, repeat. The recorded levels then drive a
//! backward dependency sweep. Sources are spread over worker threads (coarse
//! grain); large phases inside one source fan out too (fine grain).

mod state;
mod strategy;

use std::time::Instant;

use rayon::prelude::*;

pub use state::{
    accumulate_dependencies, compute_threshold, init_state, relax_frontier, settle_and_advance, shortest_paths,
    FineGrain, Schedule, SettleRule, Tentative, TraversalState,
};
pub use strategy::{FrontierMode, Strategy};

use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::oracle::{BcOptions, BcResult};
use crate::scalar::Scalar;

/// Sources per reduction chunk in strict mode. Fixed so the summation tree
/// does not depend on the worker count.
pub const STRICT_CHUNK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig<T> {
    pub schedule: Schedule<T>,
    pub workers: usize,
    pub options: BcOptions<T>,
    /// Sum per-source contributions in a fixed order so scores are bitwise
    /// reproducible across runs and worker counts.
    pub strict_reduction: bool,
}

impl<T: Scalar> EngineConfig<T> {
    pub fn new(strategy: Strategy, workers: usize) -> Self {
        Self { schedule: Schedule::new(strategy), workers, options: BcOptions::default(), strict_reduction: false }
    }

    pub fn with_options(mut self, options: BcOptions<T>) -> Self {
        self.schedule.tie_tolerance = options.tie_tolerance;
        self.options = options;
        self
    }

    pub fn with_strict_reduction(mut self, on: bool) -> Self {
        self.strict_reduction = on;
        self
    }

    pub fn with_fine_grain(mut self, fine_grain: FineGrain) -> Self {
        self.schedule.fine_grain = fine_grain;
        self
    }

    pub fn with_settle_rule(mut self, rule: SettleRule) -> Self {
        self.schedule.settle_rule = rule;
        self
    }

    fn schedule(&self) -> Schedule<T> {
        Schedule { tie_tolerance: self.options.tie_tolerance, ..self.schedule }
    }
}

/// Runs the shortest-path phase for one source and returns the final state.
pub fn single_source<T: Scalar>(g: &CsrGraph<T>, s: usize, schedule: &Schedule<T>) -> Result<TraversalState<T>> {
    let mut state = init_state(g, s, schedule.strategy.frontier())?;
    shortest_paths(g, &mut state, schedule);
    Ok(state)
}

/// One worker's private accumulation buffers plus its pooled scratch state.
struct Partial<T> {
    state: Option<TraversalState<T>>,
    node_bc: Vec<T>,
    edge_bc: Option<Vec<T>>,
    depths: Vec<(usize, usize)>,
}

impl<T: Scalar> Partial<T> {
    fn new(g: &CsrGraph<T>, edge_bc: bool) -> Self {
        Self {
            state: None,
            node_bc: vec![T::zero(); g.n()],
            edge_bc: edge_bc.then(|| vec![T::zero(); g.m()]),
            depths: Vec::new(),
        }
    }

    fn run(&mut self, g: &CsrGraph<T>, s: usize, schedule: &Schedule<T>) {
        let state = match self.state.as_mut() {
            Some(st) => {
                st.reinit(s).expect("source validated");
                st
            }
            None => self.state.insert(init_state(g, s, schedule.strategy.frontier()).expect("source validated")),
        };
        shortest_paths(g, state, schedule);
        debug_assert_eq!(state.rounds(), state.depth());
        accumulate_dependencies(g, state, schedule, &mut self.node_bc, self.edge_bc.as_deref_mut());
        self.depths.push((s, state.depth()));
    }

    fn absorb(&mut self, other: Partial<T>) {
        add_into(&mut self.node_bc, &other.node_bc);
        if let (Some(a), Some(b)) = (self.edge_bc.as_mut(), other.edge_bc.as_ref()) {
            add_into(a, b);
        }
        self.depths.extend(other.depths);
        if self.state.is_none() {
            self.state = other.state;
        }
    }
}

fn add_into<T: Scalar>(acc: &mut [T], x: &[T]) {
    acc.iter_mut().zip(x).for_each(|(a, &b)| *a += b);
}

/// Betweenness over `sources` (all vertices when `None`) with the configured
/// strategy and worker count.
pub fn bc_parallel<T: Scalar>(
    g: &CsrGraph<T>,
    config: &EngineConfig<T>,
    sources: Option<&[usize]>,
) -> Result<BcResult<T>> {
    let start = Instant::now();
    let strategy = config.schedule.strategy;
    Strategy::new(strategy.frontier(), strategy.lane_width())?;
    if config.workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let all: Vec<usize>;
    let sources = match sources {
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&s| s >= g.n()) {
                return Err(Error::InvalidArgument(format!("source {bad} out of range for {} vertices", g.n())));
            }
            list
        }
        None => {
            all = (0..g.n()).collect();
            &all
        }
    };
    let schedule = config.schedule();
    let edge_bc = config.options.edge_bc;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let merged = pool.install(|| {
        if config.strict_reduction {
            strict_merge(g, sources, &schedule, edge_bc, config.workers)
        } else {
            let chunk = sources.len().div_ceil(config.workers * 8).max(1);
            sources
                .par_chunks(chunk)
                .map(|chunk| {
                    let mut part = Partial::new(g, edge_bc);
                    chunk.iter().for_each(|&s| part.run(g, s, &schedule));
                    part
                })
                .reduce_with(|mut a, b| {
                    a.absorb(b);
                    a
                })
                .unwrap_or_else(|| Partial::new(g, edge_bc))
        }
    });

    let mut depth_per_source = vec![0; g.n()];
    for &(s, d) in &merged.depths {
        depth_per_source[s] = d;
    }
    let mut result = BcResult {
        node_bc: merged.node_bc,
        edge_bc: merged.edge_bc,
        depth_per_source: Some(depth_per_source),
        elapsed: start.elapsed(),
    };
    result.apply(config.options.normalization);
    result.elapsed = start.elapsed();
    Ok(result)
}

/// Fixed chunks of [`STRICT_CHUNK`] sources, each summed in source order and
/// folded into the total in chunk order. Chunks are evaluated in waves of
/// `workers` to bound memory.
fn strict_merge<T: Scalar>(
    g: &CsrGraph<T>,
    sources: &[usize],
    schedule: &Schedule<T>,
    edge_bc: bool,
    workers: usize,
) -> Partial<T> {
    let mut total = Partial::new(g, edge_bc);
    let chunks: Vec<&[usize]> = sources.chunks(STRICT_CHUNK).collect();
    for wave in chunks.chunks(workers.max(1)) {
        let parts: Vec<Partial<T>> = wave
            .par_iter()
            .map(|chunk| {
                let mut part = Partial::new(g, edge_bc);
                chunk.iter().for_each(|&s| part.run(g, s, schedule));
                part.state = None;
                part
            })
            .collect();
        for part in parts {
            total.absorb(part);
        }
    }
    total
}
