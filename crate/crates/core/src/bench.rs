//! Timed strategy comparisons against the sequential baseline.

use std::fmt::Write as _;

use crate::engine::{bc_parallel, EngineConfig, SettleRule, Strategy};
use crate::error::{Error, Result};
use crate::graph::{graph_stats, CsrGraph};
use crate::oracle::{brandes_sequential_sources, compare_scores, BcOptions, BcResult};
use crate::scalar::Scalar;

/// Relative tolerance every benchmarked run must meet against the baseline.
pub const SCORE_TOLERANCE: f64 = 1e-6;

pub const CSV_HEADER: &str =
    "graph,n,m,avg_degree,max_degree,strategy,lane_width,workers,wall_time,speedup_vs_baseline,avg_depth,reps,times";

#[derive(Debug, Clone, PartialEq)]
pub struct GraphDescriptor {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub max_degree: usize,
}

impl GraphDescriptor {
    pub fn of<T: Scalar>(name: &str, g: &CsrGraph<T>) -> Self {
        let s = graph_stats(g);
        Self { name: name.to_string(), n: s.n, m: s.m, avg_degree: s.avg_degree, max_degree: s.max_degree }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub graph: GraphDescriptor,
    pub strategy_name: String,
    pub lane_width: usize,
    pub workers: usize,
    /// Median of `times`, seconds.
    pub wall_time: f64,
    pub speedup_vs_baseline: f64,
    /// Mean settlement depth over the benchmarked sources; absent for the
    /// sequential baseline.
    pub avg_depth: Option<f64>,
    pub reps: usize,
    pub times: Vec<f64>,
}

/// What to time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchTarget {
    /// The heap-based baseline itself.
    Sequential,
    Parallel(Strategy),
}

impl BenchTarget {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim() {
            "seq" | "sequential" => Ok(Self::Sequential),
            other => Ok(Self::Parallel(other.parse()?)),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Sequential => "sequential".into(),
            Self::Parallel(s) => s.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub workers: usize,
    pub reps: usize,
    /// Sources used by the baseline and every target; all vertices if `None`.
    pub sources: Option<Vec<usize>>,
    /// Also time and check edge scores.
    pub edge_bc: bool,
    /// Settlement rule for parallel targets. `Inclusive` is wrong on ties and
    /// exists to show the score gate catching it.
    pub settle_rule: SettleRule,
}

impl BenchConfig {
    pub fn new(workers: usize, reps: usize) -> Self {
        Self { workers, reps, sources: None, edge_bc: false, settle_rule: SettleRule::Strict }
    }
}

fn median(times: &[f64]) -> f64 {
    let mut t = times.to_vec();
    t.sort_by(f64::total_cmp);
    let k = t.len();
    if k % 2 == 1 {
        t[k / 2]
    } else {
        (t[k / 2 - 1] + t[k / 2]) / 2.0
    }
}

fn check<T: Scalar>(name: &str, got: &BcResult<T>, want: &BcResult<T>) -> Result<()> {
    let mismatch = |detail: String| Error::ScoreMismatch { strategy: name.to_string(), detail };
    compare_scores(&got.node_bc, &want.node_bc, SCORE_TOLERANCE).map_err(|d| mismatch(format!("node {d}")))?;
    if let (Some(a), Some(b)) = (&got.edge_bc, &want.edge_bc) {
        compare_scores(a, b, SCORE_TOLERANCE).map_err(|d| mismatch(format!("edge {d}")))?;
    }
    Ok(())
}

/// Times the baseline once, then every target `reps` times. Each run is
/// checked against the baseline scores; any mismatch aborts the bench. The
/// first record is the baseline.
pub fn run_bench<T: Scalar>(
    g: &CsrGraph<T>,
    graph_name: &str,
    targets: &[BenchTarget],
    config: &BenchConfig,
) -> Result<Vec<BenchRecord>> {
    if config.reps == 0 {
        return Err(Error::InvalidArgument("reps must be at least 1".into()));
    }
    if config.workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let all: Vec<usize> = (0..g.n()).collect();
    let sources: &[usize] = config.sources.as_deref().unwrap_or(&all);
    if let Some(&bad) = sources.iter().find(|&&s| s >= g.n()) {
        return Err(Error::InvalidArgument(format!("source {bad} out of range")));
    }
    let descriptor = GraphDescriptor::of(graph_name, g);
    let options = BcOptions::default().with_edge_bc(config.edge_bc);

    let baseline = brandes_sequential_sources(g, sources, &options);
    let base_time = baseline.elapsed.as_secs_f64().max(f64::MIN_POSITIVE);
    log::info!("baseline: {base_time:.6}s over {} sources", sources.len());
    let mut records = vec![BenchRecord {
        graph: descriptor.clone(),
        strategy_name: "baseline".into(),
        lane_width: 1,
        workers: 1,
        wall_time: base_time,
        speedup_vs_baseline: 1.0,
        avg_depth: None,
        reps: 1,
        times: vec![base_time],
    }];

    let mut common_depth: Option<f64> = None;
    for target in targets {
        let name = target.name();
        let mut times = Vec::with_capacity(config.reps);
        let mut avg_depth = None;
        for _ in 0..config.reps {
            let result = match target {
                BenchTarget::Sequential => brandes_sequential_sources(g, sources, &options),
                BenchTarget::Parallel(strategy) => {
                    let cfg = EngineConfig::new(*strategy, config.workers)
                        .with_options(options)
                        .with_settle_rule(config.settle_rule);
                    bc_parallel(g, &cfg, Some(sources))?
                }
            };
            check(&name, &result, &baseline)?;
            times.push(result.elapsed.as_secs_f64().max(f64::MIN_POSITIVE));
            avg_depth = result.avg_depth(sources);
        }
        if let Some(d) = avg_depth {
            match common_depth {
                None => common_depth = Some(d),
                Some(c) if c != d => {
                    return Err(Error::ScoreMismatch {
                        strategy: name,
                        detail: format!("average depth {d} differs from {c} seen for other strategies"),
                    })
                }
                _ => {}
            }
        }
        let wall_time = median(&times);
        log::info!("{name}: median {wall_time:.6}s, speedup {:.3}", base_time / wall_time);
        records.push(BenchRecord {
            graph: descriptor.clone(),
            strategy_name: name,
            lane_width: match target {
                BenchTarget::Sequential => 1,
                BenchTarget::Parallel(s) => s.lane_width(),
            },
            workers: match target {
                BenchTarget::Sequential => 1,
                BenchTarget::Parallel(_) => config.workers,
            },
            wall_time,
            speedup_vs_baseline: base_time / wall_time,
            avg_depth,
            reps: config.reps,
            times,
        });
    }
    Ok(records)
}

/// Rounds to six significant digits and prints the shortest form.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn sanitize(name: &str) -> String {
    name.chars().map(|c| if c == ',' || c == '\n' || c == '\r' { '_' } else { c }).collect()
}

/// Header plus one row per record, in the given order. Per-rep times are
/// `;`-separated in the last column.
pub fn write_csv(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let times: Vec<String> = r.times.iter().map(|&t| sig6(t)).collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            sanitize(&r.graph.name),
            r.graph.n,
            r.graph.m,
            sig6(r.graph.avg_degree),
            r.graph.max_degree,
            sanitize(&r.strategy_name),
            r.lane_width,
            r.workers,
            sig6(r.wall_time),
            sig6(r.speedup_vs_baseline),
            r.avg_depth.map(sig6).unwrap_or_default(),
            r.reps,
            times.join(";"),
        );
    }
    out
}

/// Parses the output of [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<BenchRecord>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => return Err(Error::Parse { line: 1, message: "missing bench CSV header".into() }),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        if line.is_empty() {
            continue;
        }
        let line_no = i + 1;
        let bad = |what: &str| Error::Parse { line: line_no, message: format!("invalid {what}") };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 13 {
            return Err(bad("column count"));
        }
        let num = |k: usize, what: &str| f[k].parse::<f64>().map_err(|_| bad(what));
        let int = |k: usize, what: &str| f[k].parse::<usize>().map_err(|_| bad(what));
        records.push(BenchRecord {
            graph: GraphDescriptor {
                name: f[0].to_string(),
                n: int(1, "n")?,
                m: int(2, "m")?,
                avg_degree: num(3, "avg_degree")?,
                max_degree: int(4, "max_degree")?,
            },
            strategy_name: f[5].to_string(),
            lane_width: int(6, "lane_width")?,
            workers: int(7, "workers")?,
            wall_time: num(8, "wall_time")?,
            speedup_vs_baseline: num(9, "speedup_vs_baseline")?,
            avg_depth: if f[10].is_empty() { None } else { Some(num(10, "avg_depth")?) },
            reps: int(11, "reps")?,
            times: f[12]
                .split(';')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>().map_err(|_| bad("times")))
                .collect::<Result<_>>()?,
        });
    }
    Ok(records)
}
