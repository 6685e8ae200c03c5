use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wbc_core::bench::{run_bench, write_csv, BenchConfig, BenchTarget};
use wbc_core::engine::{bc_parallel, EngineConfig, SettleRule, Strategy};
use wbc_core::generators::{sample_sources, GenSpec};
use wbc_core::graph::{build_csr, graph_stats, parse_edge_list};
use wbc_core::oracle::{BcOptions, Normalization};
use wbc_core::output::{edge_scores_tsv, node_scores_tsv};
use wbc_core::{Error, Graph, Result};

#[derive(Parser)]
#[command(name = "wbc", version, about = "Betweenness centrality for weighted undirected graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Node (and optionally edge) betweenness of an edge-list file.
    Compute(ComputeArgs),
    /// Write a synthetic weighted graph as an edge list.
    Generate(GenerateArgs),
    /// Time strategies against the sequential baseline and emit CSV.
    Bench(BenchArgs),
    /// Print structural statistics.
    Stats(StatsArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Edge list: one `u v [w]` per line, `#` comments.
    input: PathBuf,
    /// Override every weight with 1.
    #[arg(long)]
    unit_weights: bool,
}

#[derive(Args)]
struct WorkerArgs {
    /// Worker threads (default: logical cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Use only this many randomly chosen sources.
    #[arg(long, value_name = "K")]
    sources_sample: Option<usize>,
    /// Seed for source sampling; drawn and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    Raw,
    Half,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    workers: WorkerArgs,
    /// np, we, warpW, we-warpW (W in 1,4,8,16,32), or the families warp / we-warp.
    #[arg(long, default_value = "we")]
    strategy: String,
    #[arg(long)]
    lane_width: Option<usize>,
    /// Also write `u v score` lines for every edge.
    #[arg(long)]
    edge_bc: bool,
    #[arg(long, value_enum, default_value = "raw")]
    normalize: Normalize,
    /// Relative tolerance for equal path lengths; 0 compares exactly.
    #[arg(long, default_value_t = 0.0)]
    tie_tolerance: f64,
    /// Merge per-source results in a fixed order so output is bit-identical
    /// for any worker count.
    #[arg(long)]
    strict: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Er,
    Kronecker,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Vertex count (er).
    #[arg(long)]
    nodes: Option<usize>,
    /// log2 of the vertex count (kronecker).
    #[arg(long)]
    scale: Option<u32>,
    #[arg(long, default_value_t = 8.0)]
    avg_degree: f64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    weight_min: u64,
    #[arg(long, default_value_t = 10)]
    weight_max: u64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    workers: WorkerArgs,
    /// Comma-separated strategy names.
    #[arg(long, default_value = "np,we,warp32,we-warp32", value_delimiter = ',')]
    strategies: Vec<String>,
    #[arg(long)]
    lane_width: Option<usize>,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long)]
    edge_bc: bool,
    /// Settlement rule for the parallel runs. `inclusive` miscounts tied
    /// paths and should fail the score check.
    #[arg(long, value_enum, default_value = "strict")]
    settle_rule: SettleArg,
    /// Graph label in the CSV (default: input file stem).
    #[arg(long)]
    name: Option<String>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SettleArg {
    Strict,
    Inclusive,
}

#[derive(Args)]
struct StatsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    workers: WorkerArgs,
    /// Also report the average settlement depth over the sources.
    #[arg(long)]
    depth: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Generate(a) => generate(a),
        Command::Bench(a) => bench(a),
        Command::Stats(a) => stats(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load(args: &InputArgs) -> Result<Graph> {
    let file = File::open(&args.input)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", args.input.display())))?;
    let mut edges = parse_edge_list(BufReader::new(file), 1.0)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", args.input.display())))?;
    if args.unit_weights {
        edges.set_all_weights(1.0);
    }
    build_csr(&edges)
}

impl WorkerArgs {
    fn workers(&self) -> Result<usize> {
        match self.workers {
            Some(0) => Err(Error::InvalidArgument("--workers must be at least 1".into())),
            Some(w) => Ok(w),
            None => Ok(std::thread::available_parallelism().map_or(1, |p| p.get())),
        }
    }

    fn sources(&self, n: usize) -> Option<Vec<usize>> {
        let k = self.sources_sample?;
        let seed = resolve_seed(self.seed);
        Some(sample_sources(n, k, seed))
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let drawn = rand::random();
        eprintln!("seed: {drawn}");
        drawn
    })
}

/// Writes the whole artifact at once so a failure never leaves a partial file.
fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn compute(a: ComputeArgs) -> Result<()> {
    let strategy = Strategy::parse_with_width(&a.strategy, a.lane_width)?;
    let workers = a.workers.workers()?;
    let g = load(&a.input)?;
    let sources = a.workers.sources(g.n());
    let normalization = match a.normalize {
        Normalize::Raw => Normalization::Raw,
        Normalize::Half => Normalization::Halved,
    };
    let options = BcOptions::default()
        .with_edge_bc(a.edge_bc)
        .with_normalization(normalization)
        .with_tie_tolerance(a.tie_tolerance);
    let config = EngineConfig::new(strategy, workers).with_options(options).with_strict_reduction(a.strict);

    let start = Instant::now();
    let result = bc_parallel(&g, &config, sources.as_deref())?;
    let wall = start.elapsed();
    eprintln!("n={} m={} strategy={strategy} workers={workers} wall_time={:.6}s", g.n(), g.m(), wall.as_secs_f64());

    let mut text = node_scores_tsv(&g, &result.node_bc);
    if let Some(edge_bc) = &result.edge_bc {
        text.push_str(&edge_scores_tsv(&g, edge_bc));
    }
    emit(a.output.as_deref(), &text)
}

fn generate(a: GenerateArgs) -> Result<()> {
    let seed = resolve_seed(a.seed);
    let spec = match (a.model, a.nodes, a.scale) {
        (ModelArg::Er, Some(n), None) => GenSpec::er(n, a.avg_degree, seed),
        (ModelArg::Kronecker, None, Some(scale)) => GenSpec::kronecker(scale, a.avg_degree, seed),
        (ModelArg::Er, _, _) => return Err(Error::InvalidArgument("--model er takes --nodes (and no --scale)".into())),
        (ModelArg::Kronecker, _, _) => {
            return Err(Error::InvalidArgument("--model kronecker takes --scale (and no --nodes)".into()))
        }
    }
    .with_weights(a.weight_min, a.weight_max);
    let edges = spec.generate::<f64>()?;

    let mut buf = format!("# {spec}\n").into_bytes();
    edges.write_to(&mut buf)?;
    eprintln!("generated {} edges ({spec})", edges.len());
    emit(a.output.as_deref(), &String::from_utf8_lossy(&buf))
}

fn bench(a: BenchArgs) -> Result<()> {
    let mut targets = Vec::with_capacity(a.strategies.len());
    for name in &a.strategies {
        targets.push(BenchTarget::Parallel(Strategy::parse_with_width(name, a.lane_width)?));
    }
    let workers = a.workers.workers()?;
    let g = load(&a.input)?;
    let name = a.name.clone().unwrap_or_else(|| {
        a.input.input.file_stem().map_or_else(|| "graph".into(), |s| s.to_string_lossy().into_owned())
    });
    let mut config = BenchConfig::new(workers, a.reps);
    config.sources = a.workers.sources(g.n());
    config.edge_bc = a.edge_bc;
    config.settle_rule = match a.settle_rule {
        SettleArg::Strict => SettleRule::Strict,
        SettleArg::Inclusive => SettleRule::Inclusive,
    };

    let records = run_bench(&g, &name, &targets, &config)?;
    for r in &records {
        eprintln!("{:<12} {:>10.4}s  x{:.2}", r.strategy_name, r.wall_time, r.speedup_vs_baseline);
    }
    emit(a.output.as_deref(), &write_csv(&records))
}

fn stats(a: StatsArgs) -> Result<()> {
    let g = load(&a.input)?;
    let mut line = graph_stats(&g).to_string();
    if a.depth {
        let workers = a.workers.workers()?;
        let sources = a.workers.sources(g.n()).unwrap_or_else(|| (0..g.n()).collect());
        let config = EngineConfig::new(Strategy::WORK_EFFICIENT, workers);
        let result = bc_parallel(&g, &config, Some(&sources))?;
        if let Some(depth) = result.avg_depth(&sources) {
            line.push_str(&format!(" avg_depth={depth:.4}"));
        }
    }
    println!("{line}");
    Ok(())
}
