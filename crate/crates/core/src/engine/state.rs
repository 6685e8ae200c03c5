//! Per-source traversal state and the four phases of one source's pass:
//! relax, threshold, settle, and dependency accumulation.

use parking_lot::Mutex;
use rayon::prelude::*;

use super::strategy::{FrontierMode, Strategy};
use crate::error::{Error, Result};
use crate::graph::CsrGraph;
use crate::scalar::Scalar;

/// Which settlement test to apply against the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SettleRule {
    /// `d(v) < threshold`: distances and path counts are final.
    #[default]
    Strict,
    /// `d(v) <= threshold`: distances stay correct but path counts may be
    /// lost when a vertex settles alongside one of its shortest-path
    /// predecessors. Only useful as a negative control.
    Inclusive,
}

/// When a single source's phases fan out over the thread pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FineGrain {
    /// Phases with fewer work items than this run on the calling thread.
    pub min_items: usize,
    /// Minimum number of work items per parallel task.
    pub chunk: usize,
}

impl FineGrain {
    pub const DISABLED: FineGrain = FineGrain { min_items: usize::MAX, chunk: 1 };
    pub const ALWAYS: FineGrain = FineGrain { min_items: 0, chunk: 1 };

    #[inline]
    fn active(&self, items: usize) -> bool {
        items >= self.min_items && items > 0
    }
}

impl Default for FineGrain {
    fn default() -> Self {
        Self { min_items: 1 << 15, chunk: 1024 }
    }
}

/// Everything a phase needs to know about how to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule<T> {
    pub strategy: Strategy,
    pub settle_rule: SettleRule,
    pub tie_tolerance: T,
    pub fine_grain: FineGrain,
}

impl<T: Scalar> Schedule<T> {
    pub fn new(strategy: Strategy) -> Self {
        Self { strategy, settle_rule: SettleRule::Strict, tie_tolerance: T::zero(), fine_grain: FineGrain::default() }
    }
}

/// Tentative distance and path count of one vertex, guarded together so a
/// relax step is one exclusive read-modify-write.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tentative<T> {
    pub dist: T,
    pub sigma: T,
}

/// Working set for one source.
///
/// `settled` and `ends` record the settlement levels: `settled[ends[k-1]..ends[k]]`
/// is level `k - 1`, with the source alone in level 0.
#[derive(Debug)]
pub struct TraversalState<T> {
    source: usize,
    mode: FrontierMode,
    tentative: Vec<Mutex<Tentative<T>>>,
    // final values, written when a vertex settles
    dist: Vec<T>,
    sigma: Vec<T>,
    delta: Vec<T>,
    unsettled: Vec<bool>,
    frontier_flags: Vec<bool>,
    frontier_queue: Vec<usize>,
    settled: Vec<usize>,
    ends: Vec<usize>,
    level: Vec<u32>,
    threshold: T,
    rounds: usize,
}

const UNSETTLED_LEVEL: u32 = u32::MAX;

/// Fresh state for source `s`: only `s` is settled and it is the whole
/// frontier; the threshold starts at zero.
pub fn init_state<T: Scalar>(g: &CsrGraph<T>, s: usize, mode: FrontierMode) -> Result<TraversalState<T>> {
    let n = g.n();
    let mut state = TraversalState {
        source: s,
        mode,
        tentative: (0..n).map(|_| Mutex::new(Tentative { dist: T::infinity(), sigma: T::zero() })).collect(),
        dist: vec![T::infinity(); n],
        sigma: vec![T::zero(); n],
        delta: vec![T::zero(); n],
        unsettled: vec![true; n],
        frontier_flags: match mode {
            FrontierMode::ScanAll => vec![false; n],
            FrontierMode::Queue => Vec::new(),
        },
        frontier_queue: Vec::with_capacity(n),
        settled: Vec::with_capacity(n),
        ends: Vec::with_capacity(n + 1),
        level: vec![UNSETTLED_LEVEL; n],
        threshold: T::zero(),
        rounds: 0,
    };
    state.reinit(s)?;
    Ok(state)
}

impl<T: Scalar> TraversalState<T> {
    /// Resets the state in place for a new source (frontier mode kept).
    pub fn reinit(&mut self, s: usize) -> Result<()> {
        let n = self.dist.len();
        if s >= n {
            return Err(Error::InvalidArgument(format!("source {s} out of range for {n} vertices")));
        }
        for cell in &mut self.tentative {
            *cell.get_mut() = Tentative { dist: T::infinity(), sigma: T::zero() };
        }
        self.dist.fill(T::infinity());
        self.sigma.fill(T::zero());
        self.delta.fill(T::zero());
        self.unsettled.fill(true);
        self.frontier_flags.fill(false);
        self.level.fill(UNSETTLED_LEVEL);
        self.frontier_queue.clear();
        self.settled.clear();
        self.ends.clear();

        self.source = s;
        *self.tentative[s].get_mut() = Tentative { dist: T::zero(), sigma: T::one() };
        self.dist[s] = T::zero();
        self.sigma[s] = T::one();
        self.unsettled[s] = false;
        self.level[s] = 0;
        match self.mode {
            FrontierMode::ScanAll => self.frontier_flags[s] = true,
            FrontierMode::Queue => self.frontier_queue.push(s),
        }
        self.settled.push(s);
        self.ends.extend([0, 1]);
        self.threshold = T::zero();
        self.rounds = 0;
        Ok(())
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn mode(&self) -> FrontierMode {
        self.mode
    }

    /// Distance of `v` if settled, otherwise its tentative distance.
    pub fn dist(&self, v: usize) -> T {
        if self.unsettled[v] {
            self.tentative[v].lock().dist
        } else {
            self.dist[v]
        }
    }

    /// Path count of `v` if settled, otherwise its tentative count.
    pub fn sigma(&self, v: usize) -> T {
        if self.unsettled[v] {
            self.tentative[v].lock().sigma
        } else {
            self.sigma[v]
        }
    }

    pub fn delta(&self) -> &[T] {
        &self.delta
    }

    pub fn is_settled(&self, v: usize) -> bool {
        !self.unsettled[v]
    }

    pub fn unsettled_count(&self) -> usize {
        self.unsettled.iter().filter(|&&u| u).count()
    }

    /// Vertices in settlement order.
    pub fn settled_order(&self) -> &[usize] {
        &self.settled
    }

    pub fn ends(&self) -> &[usize] {
        &self.ends
    }

    /// Settled vertices of level `k` (level 0 is the source).
    pub fn level_members(&self, k: usize) -> &[usize] {
        &self.settled[self.ends[k]..self.ends[k + 1]]
    }

    /// Number of levels, `ends.len() - 1`.
    pub fn depth(&self) -> usize {
        self.ends.len() - 1
    }

    pub fn threshold(&self) -> T {
        self.threshold
    }

    /// Relax/threshold/settle rounds executed so far.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Current frontier, in settlement order.
    pub fn frontier(&self) -> Vec<usize> {
        match self.mode {
            FrontierMode::Queue => self.frontier_queue.clone(),
            FrontierMode::ScanAll => (0..self.frontier_flags.len()).filter(|&v| self.frontier_flags[v]).collect(),
        }
    }

    /// Checks that every shortest-path successor of a settled vertex sits in
    /// a strictly deeper level, which is what makes one accumulation level
    /// safe to process in parallel.
    pub fn levels_are_ordered(&self, g: &CsrGraph<T>, tie_tolerance: T) -> bool {
        self.settled.iter().all(|&w| {
            g.neighbors(w).all(|(v, weight, _)| {
                !T::approx_eq(self.dist[v], self.dist[w] + weight, tie_tolerance) || self.level[v] > self.level[w]
            })
        })
    }
}

#[inline]
fn relax_edge<T: Scalar>(target: &mut Tentative<T>, alt: T, sigma_from: T, tol: T) {
    if T::approx_eq(alt, target.dist, tol) {
        target.sigma += sigma_from;
    } else if alt < target.dist {
        target.dist = alt;
        target.sigma = sigma_from;
    }
}

/// Relaxes every edge from a frontier vertex to an unsettled neighbour.
///
/// Work items are `(vertex, lane)` pairs: every vertex in `ScanAll` mode,
/// only queued vertices in `Queue` mode. Each edge update holds the target's
/// lock, so a parallel round equals some sequential order of edge relaxations.
pub fn relax_frontier<T: Scalar>(g: &CsrGraph<T>, state: &mut TraversalState<T>, schedule: &Schedule<T>) {
    let lanes = schedule.strategy.lane_width();
    let tol = schedule.tie_tolerance;
    let items = match state.mode {
        FrontierMode::ScanAll => g.n() * lanes,
        FrontierMode::Queue => state.frontier_queue.len() * lanes,
    };

    if schedule.fine_grain.active(items) {
        let st = &*state;
        let work_vertex = |item: usize| -> Option<usize> {
            let idx = item / lanes;
            match st.mode {
                FrontierMode::ScanAll => st.frontier_flags[idx].then_some(idx),
                FrontierMode::Queue => Some(st.frontier_queue[idx]),
            }
        };
        (0..items).into_par_iter().with_min_len(schedule.fine_grain.chunk.max(1)).for_each(|item| {
            let Some(v) = work_vertex(item) else { return };
            let (dv, sv) = (st.dist[v], st.sigma[v]);
            let row = g.slots(v);
            for slot in (row.start + item % lanes..row.end).step_by(lanes) {
                let u = g.neighbor(slot);
                if st.unsettled[u] {
                    relax_edge(&mut st.tentative[u].lock(), dv + g.weight(slot), sv, tol);
                }
            }
        });
    } else {
        let TraversalState { mode, tentative, dist, sigma, unsettled, frontier_flags, frontier_queue, .. } = state;
        let mut visit = |v: usize| {
            let (dv, sv) = (dist[v], sigma[v]);
            let row = g.slots(v);
            for lane in 0..lanes {
                for slot in (row.start + lane..row.end).step_by(lanes) {
                    let u = g.neighbor(slot);
                    if unsettled[u] {
                        relax_edge(tentative[u].get_mut(), dv + g.weight(slot), sv, tol);
                    }
                }
            }
        };
        match *mode {
            FrontierMode::ScanAll => {
                for (v, &on) in frontier_flags.iter().enumerate() {
                    if on {
                        visit(v);
                    }
                }
            }
            FrontierMode::Queue => frontier_queue.iter().for_each(|&v| visit(v)),
        }
    }
}

/// Settlement threshold: the minimum over unsettled reached vertices of
/// tentative distance plus lightest incident weight; infinity when none.
/// Always scans every vertex, whatever the strategy.
pub fn compute_threshold<T: Scalar>(g: &CsrGraph<T>, state: &mut TraversalState<T>, schedule: &Schedule<T>) -> T {
    let n = g.n();
    let threshold = if schedule.fine_grain.active(n) {
        let st = &*state;
        (0..n)
            .into_par_iter()
            .with_min_len(schedule.fine_grain.chunk.max(1))
            .filter(|&v| st.unsettled[v])
            .map(|v| st.tentative[v].lock().dist + g.min_incident_weight(v))
            .reduce(T::infinity, T::min)
    } else {
        let mut t = T::infinity();
        for (v, cell) in state.tentative.iter_mut().enumerate() {
            if state.unsettled[v] {
                let d = cell.get_mut().dist;
                if d.is_finite() {
                    t = t.min(d + g.min_incident_weight(v));
                }
            }
        }
        t
    };
    state.threshold = threshold;
    threshold
}

/// Settles every unsettled vertex below the threshold (or at it, under
/// [`SettleRule::Inclusive`]), makes them the new frontier, and records a
/// new level when any settled. Returns how many settled.
pub fn settle_and_advance<T: Scalar>(g: &CsrGraph<T>, state: &mut TraversalState<T>, schedule: &Schedule<T>) -> usize {
    let n = g.n();
    let threshold = state.threshold;
    let admits = |d: T| match schedule.settle_rule {
        SettleRule::Strict => d < threshold,
        SettleRule::Inclusive => d <= threshold,
    };

    let newly: Vec<usize> = if schedule.fine_grain.active(n) {
        let st = &*state;
        (0..n)
            .into_par_iter()
            .with_min_len(schedule.fine_grain.chunk.max(1))
            .filter(|&v| st.unsettled[v] && admits(st.tentative[v].lock().dist))
            .collect()
    } else {
        (0..n).filter(|&v| state.unsettled[v] && admits(state.tentative[v].get_mut().dist)).collect()
    };

    state.rounds += 1;
    match state.mode {
        FrontierMode::ScanAll => {
            let last = state.ends.len() - 1;
            let (lo, hi) = (state.ends[last - 1], state.ends[last]);
            for &v in &state.settled[lo..hi] {
                state.frontier_flags[v] = false;
            }
        }
        FrontierMode::Queue => state.frontier_queue.clear(),
    }
    if newly.is_empty() {
        return 0;
    }
    let level = state.ends.len() as u32 - 1;
    for &v in &newly {
        let t = *state.tentative[v].get_mut();
        state.dist[v] = t.dist;
        state.sigma[v] = t.sigma;
        state.unsettled[v] = false;
        state.level[v] = level;
        state.settled.push(v);
        match state.mode {
            FrontierMode::ScanAll => state.frontier_flags[v] = true,
            FrontierMode::Queue => state.frontier_queue.push(v),
        }
    }
    let end = state.settled.len();
    state.ends.push(end);
    newly.len()
}

/// Runs relax/threshold/settle rounds until the threshold is infinite.
pub fn shortest_paths<T: Scalar>(g: &CsrGraph<T>, state: &mut TraversalState<T>, schedule: &Schedule<T>) {
    while state.threshold < T::infinity() {
        relax_frontier(g, state, schedule);
        compute_threshold(g, state, schedule);
        let count = settle_and_advance(g, state, schedule);
        debug_assert!(count > 0 || state.threshold == T::infinity(), "round settled nothing below a finite threshold");
    }
}

#[inline]
fn vertex_dependency<T: Scalar>(
    g: &CsrGraph<T>,
    state: &TraversalState<T>,
    w: usize,
    lanes: usize,
    tol: T,
    check_levels: bool,
) -> T {
    let (dw, sw) = (state.dist[w], state.sigma[w]);
    let row = g.slots(w);
    let mut total = T::zero();
    for lane in 0..lanes {
        let mut partial = T::zero();
        for slot in (row.start + lane..row.end).step_by(lanes) {
            let v = g.neighbor(slot);
            if T::approx_eq(state.dist[v], dw + g.weight(slot), tol) {
                debug_assert!(!check_levels || state.level[v] > state.level[w], "successor {v} not deeper than {w}");
                partial += sw / state.sigma[v] * (T::one() + state.delta[v]);
            }
        }
        total += partial;
    }
    total
}

/// Backward dependency accumulation, deepest level first. Vertices within a
/// level are independent; each adds its dependency to `bc` (except the
/// source). When `edge_bc` is given, each shortest-path edge adds its share
/// to its canonical edge slot.
pub fn accumulate_dependencies<T: Scalar>(
    g: &CsrGraph<T>,
    state: &mut TraversalState<T>,
    schedule: &Schedule<T>,
    bc: &mut [T],
    edge_bc: Option<&mut [T]>,
) {
    let lanes = schedule.strategy.lane_width();
    let tol = schedule.tie_tolerance;
    let s = state.source;
    let check_levels = schedule.settle_rule == SettleRule::Strict;
    for k in (1..state.ends.len()).rev() {
        let (lo, hi) = (state.ends[k - 1], state.ends[k]);
        if schedule.fine_grain.active((hi - lo) * lanes) {
            let st = &*state;
            let values: Vec<T> = st.settled[lo..hi]
                .par_iter()
                .with_min_len((schedule.fine_grain.chunk / lanes).max(1))
                .map(|&w| vertex_dependency(g, st, w, lanes, tol, check_levels))
                .collect();
            for (i, value) in values.into_iter().enumerate() {
                let w = state.settled[lo + i];
                state.delta[w] = value;
            }
        } else {
            for i in lo..hi {
                let w = state.settled[i];
                state.delta[w] = vertex_dependency(g, state, w, lanes, tol, check_levels);
            }
        }
        for &w in &state.settled[lo..hi] {
            if w != s {
                bc[w] += state.delta[w];
            }
        }
    }

    if let Some(edge_bc) = edge_bc {
        for &w in &state.settled {
            let (dw, sw) = (state.dist[w], state.sigma[w]);
            for (v, weight, e) in g.neighbors(w) {
                if T::approx_eq(state.dist[v], dw + weight, tol) {
                    edge_bc[e] += sw / state.sigma[v] * (T::one() + state.delta[v]);
                }
            }
        }
    }
}
