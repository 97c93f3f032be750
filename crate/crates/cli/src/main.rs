use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use procorder::bench::{run_bench, run_oracle, BenchConfig, OracleKind};
use procorder::engine::{run, EngineConfig, Mode, RunReport};
use procorder::gograph::{reorder, PipelineReport};
use procorder::{
    generate, AlgoKind, AlgoParams, Error, GoGraphConfig, Graph, Method, MethodParams, Ordering, ParseOptions,
};

#[derive(Parser)]
#[command(
    name = "procorder",
    version,
    about = "Processing-order metric, reordering and sweep engine"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic edge list.
    Gen(GenArgs),
    /// Compute a processing order and report its positive-edge metric.
    Reorder(ReorderArgs),
    /// Run one algorithm and print the run report as JSON.
    Run(RunArgs),
    /// Method-by-algorithm sweep counts as CSV.
    Bench(BenchArgs),
    /// Exhaustive optimum on a tiny graph compared with the reordering.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Chain,
    Dag,
    Er,
    Ba,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: usize,
    /// Edge count (er), attachment degree (ba) or edge probability (dag).
    #[arg(long)]
    param: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    /// Replace edge weights with seeded integers in 1..=10.
    #[arg(long, value_name = "SEED")]
    random_weights: Option<u64>,
}

#[derive(Args, Clone)]
struct OrderingArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.002)]
    hub_frac: f64,
    #[arg(long, default_value_t = 1024)]
    max_part_size: usize,
}

impl OrderingArgs {
    fn params(&self) -> MethodParams {
        MethodParams {
            seed: self.seed,
            gograph: GoGraphConfig {
                hub_fraction: self.hub_frac,
                max_part_size: self.max_part_size,
                audit: false,
            },
        }
    }
}

#[derive(Args, Clone)]
struct AlgoArgs {
    #[arg(long, default_value_t = 0.85)]
    damping: f64,
    #[arg(long, default_value_t = 0.85)]
    penalty: f64,
    #[arg(long, default_value_t = 0)]
    source: u64,
}

impl AlgoArgs {
    fn params(&self, graph: &Graph) -> Result<AlgoParams, Error> {
        let source = *graph
            .label_index()
            .get(&self.source)
            .ok_or_else(|| Error::InvalidParameter(format!("source {} is not a vertex of the input", self.source)))?;
        Ok(AlgoParams {
            damping: self.damping,
            penalty: self.penalty,
            source,
        })
    }
}

#[derive(Args, Clone)]
struct EngineArgs {
    #[arg(long, default_value_t = 1e-6)]
    epsilon: f64,
    #[arg(long, default_value_t = 10_000)]
    max_sweeps: usize,
    /// Leave wall-time fields out so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct ReorderArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, default_value = "gograph")]
    method: Method,
    #[command(flatten)]
    ordering: OrderingArgs,
    /// Order file to write (one original id per line).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Order file; required in async mode.
    #[arg(long)]
    order: Option<PathBuf>,
    #[arg(long)]
    algo: AlgoKind,
    #[arg(long, default_value = "async")]
    mode: Mode,
    #[command(flatten)]
    algo_args: AlgoArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// Per-sweep CSV trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    require_converged: bool,
    /// Report file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "identity,random,degsort,hubsort,hubcluster,topo,gograph"
    )]
    methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "pagerank,sssp,bfs,php")]
    algos: Vec<AlgoKind>,
    #[command(flatten)]
    ordering: OrderingArgs,
    #[command(flatten)]
    algo_args: AlgoArgs,
    #[command(flatten)]
    engine: EngineArgs,
    /// CSV file; defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON with correlations and skipped methods; defaults to stderr.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    MOpt,
    RoundsOpt,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value = "sssp")]
    algo: AlgoKind,
    #[command(flatten)]
    ordering: OrderingArgs,
    #[command(flatten)]
    algo_args: AlgoArgs,
    #[command(flatten)]
    engine: EngineArgs,
}

enum Failure {
    Lib(Error),
    NotConverged,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } | Error::Cyclic { .. } => 3,
        Error::NonFinite { .. } => 1,
        _ => 2,
    }
}

fn load(args: &GraphArgs) -> Result<Graph, Error> {
    let file = File::open(&args.input)?;
    let list = procorder::parse_edge_list(BufReader::new(file), &ParseOptions::default())?;
    let graph = Graph::build(list);
    Ok(match args.random_weights {
        Some(seed) => graph.with_random_weights(seed),
        None => graph,
    })
}

fn output(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json<T: Serialize>(mut out: impl Write, value: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

fn gen(args: GenArgs) -> Result<(), Failure> {
    let missing = |what: &str| Error::InvalidParameter(format!("--param ({what}) is required for this model"));
    let graph = match args.model {
        Model::Chain => generate::chain(args.n),
        Model::Dag => generate::random_dag(
            args.n,
            args.param.ok_or_else(|| missing("edge probability"))?,
            args.seed,
        )?,
        Model::Er => {
            let m = args.param.ok_or_else(|| missing("edge count"))?;
            generate::erdos_renyi_checked(args.n, m as usize, args.seed)?
        }
        Model::Ba => {
            let d = args.param.ok_or_else(|| missing("attachment degree"))?;
            generate::barabasi_albert_checked(args.n, d as usize, args.seed)?
        }
    };
    let mut out = output(args.out.as_deref())?;
    graph.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReorderSummary {
    method: String,
    n: usize,
    m: usize,
    m_value: u64,
    edges_considered: u64,
    ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pipeline: Option<PipelineReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reorder_time: Option<f64>,
}

fn reorder_cmd(args: ReorderArgs) -> Result<(), Failure> {
    let graph = load(&args.graph)?;
    let params = args.ordering.params();
    let start = Instant::now();
    let (order, pipeline) = match args.method {
        Method::GoGraph => {
            let r = reorder(&graph, &params.gograph)?;
            (r.order, Some(r.report))
        }
        m => (m.order(&graph, &params)?, None),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let metric = procorder::evaluate_m(&graph, &order)?;
    if let Some(path) = &args.out {
        let mut w = BufWriter::new(File::create(path)?);
        order.write_to(&graph, &mut w)?;
        w.flush()?;
    }
    let summary = ReorderSummary {
        method: args.method.to_string(),
        n: graph.n(),
        m: graph.m(),
        m_value: metric.m_value,
        edges_considered: metric.edges_considered,
        ratio: metric.ratio,
        pipeline,
        reorder_time: (!args.no_timing).then_some(elapsed),
    };
    write_json(io::stdout().lock(), &summary)?;
    Ok(())
}

fn run_cmd(args: RunArgs) -> Result<(), Failure> {
    let graph = load(&args.graph)?;
    let params = args.algo_args.params(&graph)?;
    let spec = args.algo.build(&params)?;
    let order = match (&args.order, args.mode) {
        (Some(path), _) => Some(Ordering::read_from(&graph, BufReader::new(File::open(path)?))?),
        (None, Mode::Async) => return Err(Error::InvalidParameter("async mode requires --order".into()).into()),
        (None, Mode::Sync) => None,
    };
    let config = EngineConfig {
        mode: args.mode,
        epsilon: args.engine.epsilon,
        max_sweeps: args.engine.max_sweeps,
        trace: args.trace.is_some(),
        timing: !args.engine.no_timing,
    };
    let report: RunReport = run(&graph, order.as_ref(), spec.as_ref(), &config)?;
    if let Some(path) = &args.trace {
        let mut w = BufWriter::new(File::create(path)?);
        report.write_trace_csv(&mut w)?;
        w.flush()?;
    }
    write_json(output(args.out.as_deref())?, &report)?;
    if args.require_converged && !report.converged {
        return Err(Failure::NotConverged);
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchSummary<'a> {
    correlations: &'a [procorder::bench::Correlation],
    skipped: &'a [procorder::bench::Skipped],
}

fn bench_cmd(args: BenchArgs) -> Result<(), Failure> {
    let graph = load(&args.graph)?;
    let config = BenchConfig {
        methods: args.methods.clone(),
        algos: args.algos.clone(),
        algo_params: args.algo_args.params(&graph)?,
        method_params: args.ordering.params(),
        engine: EngineConfig {
            epsilon: args.engine.epsilon,
            max_sweeps: args.engine.max_sweeps,
            ..EngineConfig::default()
        },
        timing: !args.engine.no_timing,
    };
    let matrix = run_bench(&graph, &config)?;
    let mut out = output(args.out.as_deref())?;
    matrix.write_csv(&mut out)?;
    out.flush()?;
    let summary = BenchSummary {
        correlations: &matrix.correlations,
        skipped: &matrix.skipped,
    };
    match &args.summary {
        Some(p) => write_json(BufWriter::new(File::create(p)?), &summary)?,
        None => write_json(io::stderr().lock(), &summary)?,
    }
    Ok(())
}

fn oracle_cmd(args: OracleArgs) -> Result<(), Failure> {
    let graph = load(&args.graph)?;
    let kind = match args.kind {
        Kind::MOpt => OracleKind::MOpt,
        Kind::RoundsOpt => OracleKind::RoundsOpt,
    };
    let engine = EngineConfig {
        epsilon: args.engine.epsilon,
        max_sweeps: args.engine.max_sweeps,
        ..EngineConfig::default()
    };
    let report = run_oracle(
        &graph,
        kind,
        args.algo,
        &args.algo_args.params(&graph)?,
        &engine,
        &args.ordering.params(),
    )?;
    write_json(io::stdout().lock(), &report)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Reorder(a) => reorder_cmd(a),
        Command::Run(a) => run_cmd(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Oracle(a) => oracle_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotConverged) => {
            eprintln!("error: run did not converge");
            ExitCode::from(4)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
