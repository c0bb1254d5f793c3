use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ricci_core::bench::bench_edges;
use ricci_core::experiments::{
    alpha_sweep, connectivity_sweep, correlate, geo_curvature_scatter, robustness_sweep, robustness_trials, Direction,
    ExperimentSeries, RemovalStrategy, SeriesMeta, YTransform,
};
use ricci_core::generators::GenSpec;
use ricci_core::graph::{graph_stats, EdgeId};
use ricci_core::io::{self, OutputFormat};
use ricci_core::metrics::{
    clustering_vector, degree_vector, edge_betweenness, farness, slim_triangle_delta, DeltaMode, DEFAULT_EXACT_CAP,
    DEFAULT_SAMPLES,
};
use ricci_core::ricci::all_edge_curvatures;
use ricci_core::{with_workers, AlphaParam, CurvatureMap, Graph};

#[derive(Parser)]
#[command(
    name = "ricci",
    version,
    about = "Ollivier-Ricci curvature of networks with exact optimal transport"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature of every edge, written as a table.
    Curvature(CurvatureArgs),
    /// Node/edge counts, degrees, diameter and mean path length.
    Stats(CommonArgs),
    /// Curvature histograms, one per alpha.
    Histogram(HistogramArgs),
    /// Connectivity and robustness sweeps ordered by curvature.
    Sweep(SweepArgs),
    /// Correlation between curvature and a centrality metric.
    Correlate(CorrelateArgs),
    /// Curvature against great-circle edge length.
    Geo(GeoArgs),
    /// Slim-triangle hyperbolicity.
    Hyperbolicity(HyperbolicityArgs),
    /// Per-edge solver time against degree product.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Edge list: two labels per line, optional third backbone column.
    #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
    input: Option<PathBuf>,
    /// Model family: gnp, watts_strogatz, random_regular, configuration,
    /// preferential_attachment, hyperbolic_grid.
    #[arg(long)]
    generate: Option<String>,
    /// Family parameters, e.g. `n=1000,k=2` or `preset=exodus_proxy`.
    #[arg(long, requires = "generate", default_value = "")]
    params: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Laziness of the random walk, decimal or fraction in [0, 1].
    #[arg(long, default_value = "0.5", value_parser = parse_alpha)]
    alpha: AlphaParam,
    /// Worker threads; never changes results.
    #[arg(long, env = "RICCI_WORKERS", value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct CurvatureArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct HistogramArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 0.1)]
    bin_width: f64,
    /// Comma-separated alphas; overrides --alpha.
    #[arg(long, value_delimiter = ',', value_parser = parse_alpha)]
    alphas: Vec<AlphaParam>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SweepKind {
    Connectivity,
    Robustness,
    All,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum DirectionArg {
    Increasing,
    Decreasing,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum StrategyArg {
    MostNegativeFirst,
    Random,
    Both,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long = "type", value_enum, default_value_t = SweepKind::All)]
    kind: SweepKind,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value_t = StrategyArg::Both)]
    strategy: StrategyArg,
    /// Random-removal repetitions (seeds seed, seed+1, ...).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Betweenness,
    Farness,
    Degree,
    Clustering,
}

#[derive(Args)]
struct CorrelateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    metric: MetricArg,
    /// Correlate against log10 of the metric.
    #[arg(long)]
    log_y: bool,
}

#[derive(Args)]
struct GeoArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// CSV with header and columns label,lat,lon.
    #[arg(long)]
    coords: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

#[derive(Args)]
struct HyperbolicityArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Largest graph accepted in exact mode.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Timed runs per edge; the fastest is kept.
    #[arg(long, default_value_t = 5)]
    reps: usize,
}

fn parse_alpha(s: &str) -> std::result::Result<AlphaParam, String> {
    s.parse::<AlphaParam>().map_err(|e| match e {
        ricci_core::Error::AlphaOutOfRange => "alpha must be in [0,1]".to_string(),
        other => other.to_string(),
    })
}

/// A loaded or generated graph plus the header lines that identify it.
struct Input {
    graph: Graph,
    backbone: BTreeMap<EdgeId, String>,
    source: Vec<(String, String)>,
}

fn load(c: &CommonArgs) -> Result<Input> {
    if let Some(path) = &c.input {
        let loaded = io::load_edge_list(path).with_context(|| format!("reading {}", path.display()))?;
        let r = &loaded.report;
        eprintln!(
            "read {} lines: {} edges, {} self-loops and {} duplicates dropped",
            r.lines, r.edges_read, r.self_loops_dropped, r.duplicates_dropped
        );
        return Ok(Input {
            graph: loaded.graph,
            backbone: loaded.backbone,
            source: vec![("input".into(), path.display().to_string())],
        });
    }
    let family = c.generate.as_deref().expect("clap enforces one input");
    let mut params = BTreeMap::new();
    for kv in c.params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((k, v)) = kv.split_once('=') else {
            bail!("parameter {kv:?} is not KEY=VALUE");
        };
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    let spec = GenSpec::from_params(family, &params, c.seed)?;
    let graph = spec.generate()?;
    Ok(Input {
        graph,
        backbone: BTreeMap::new(),
        source: vec![
            ("generate".into(), spec.family_name().into()),
            ("params".into(), c.params.clone()),
            ("generator_seed".into(), c.seed.to_string()),
        ],
    })
}

fn workers(c: &CommonArgs) -> usize {
    c.workers
        .map(|w| w as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn open(c: &CommonArgs, name: &str) -> Result<(PathBuf, std::fs::File)> {
    io::output_path(&c.out, name, c.format.into()).with_context(|| format!("creating output in {}", c.out.display()))
}

fn emit_series(c: &CommonArgs, name: &str, s: &ExperimentSeries, extra: &[(String, String)]) -> Result<PathBuf> {
    let (path, f) = open(c, name)?;
    io::write_series(s, extra, c.format.into(), f)?;
    Ok(path)
}

fn curvatures(c: &CommonArgs, g: &Graph) -> Result<CurvatureMap> {
    Ok(all_edge_curvatures(g, c.alpha)?)
}

fn say(path: &Path) {
    println!("{}", path.display());
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Curvature(a) => {
            let c = &a.common;
            let input = load(c)?;
            let cmap = with_workers(workers(c), || curvatures(c, &input.graph))??;
            let (path, f) = open(c, "curvature")?;
            io::write_curvatures(&input.graph, &cmap, &input.backbone, &input.source, c.format.into(), f)?;
            say(&path);
        }
        Command::Stats(c) => {
            let input = load(&c)?;
            let s = with_workers(workers(&c), || graph_stats(&input.graph))?;
            let mut out = std::io::stdout().lock();
            match c.format {
                Format::Csv => {
                    writeln!(out, "nodes,edges,max_degree,avg_degree,diameter,mean_shortest_path")?;
                    writeln!(
                        out,
                        "{},{},{},{:.3},{},{:.3}",
                        s.node_count, s.edge_count, s.max_degree, s.avg_degree, s.diameter, s.mean_shortest_path_length
                    )?;
                }
                Format::Json => writeln!(out, "{}", serde_json::to_string(&s)?)?,
            }
        }
        Command::Histogram(a) => {
            let c = &a.common;
            let input = load(c)?;
            let alphas = if a.alphas.is_empty() {
                vec![c.alpha]
            } else {
                a.alphas.clone()
            };
            let hists = with_workers(workers(c), || alpha_sweep(&input.graph, &alphas, a.bin_width))??;
            for (alpha, h) in &hists {
                let mut meta = SeriesMeta::for_graph(&input.graph);
                meta.alpha = Some(*alpha);
                let name = if hists.len() == 1 {
                    "histogram".to_string()
                } else {
                    format!("histogram_alpha_{}", alpha.to_string().replace('/', "_"))
                };
                let (path, f) = open(c, &name)?;
                io::write_histogram(h, &meta, &input.source, c.format.into(), f)?;
                say(&path);
            }
        }
        Command::Sweep(a) => {
            let c = &a.common;
            let input = load(c)?;
            let g = &input.graph;
            let cmap = with_workers(workers(c), || curvatures(c, g))??;
            if a.kind != SweepKind::Robustness {
                let dirs = match a.direction {
                    DirectionArg::Increasing => vec![Direction::Increasing],
                    DirectionArg::Decreasing => vec![Direction::Decreasing],
                    DirectionArg::Both => vec![Direction::Increasing, Direction::Decreasing],
                };
                for d in dirs {
                    let s = connectivity_sweep(g, &cmap, d)?;
                    say(&emit_series(
                        c,
                        &format!("connectivity_{}", d.name()),
                        &s,
                        &input.source,
                    )?);
                }
            }
            if a.kind != SweepKind::Connectivity {
                if a.strategy != StrategyArg::Random {
                    let s = robustness_sweep(g, &cmap, RemovalStrategy::MostNegativeFirst)?;
                    say(&emit_series(c, "robustness_most_negative_first", &s, &input.source)?);
                }
                if a.strategy != StrategyArg::MostNegativeFirst {
                    let t = robustness_trials(g, &cmap, c.seed, a.trials as usize)?;
                    if t.trials.len() == 1 {
                        say(&emit_series(c, "robustness_random", &t.trials[0], &input.source)?);
                    } else {
                        for (i, s) in t.trials.iter().enumerate() {
                            say(&emit_series(
                                c,
                                &format!("robustness_random_trial{i}"),
                                s,
                                &input.source,
                            )?);
                        }
                        say(&emit_series(c, "robustness_random_mean", &t.mean, &input.source)?);
                    }
                }
            }
        }
        Command::Correlate(a) => {
            let c = &a.common;
            let input = load(c)?;
            let g = &input.graph;
            let (cmap, metric) = with_workers(workers(c), || -> Result<_> {
                let cmap = curvatures(c, g)?;
                let metric = match a.metric {
                    MetricArg::Betweenness => edge_betweenness(g),
                    MetricArg::Farness => farness(g),
                    MetricArg::Degree => degree_vector(g),
                    MetricArg::Clustering => clustering_vector(g),
                };
                Ok((cmap, metric))
            })??;
            let transform = if a.log_y {
                YTransform::Log10
            } else {
                YTransform::Identity
            };
            let out = correlate(g, &cmap, &metric, transform)?;
            let path = emit_series(
                c,
                &format!("correlate_{}", metric.kind.name()),
                &out.series,
                &input.source,
            )?;
            say(&path);
            println!(
                "r = {:.6} ({} points, {} excluded)",
                out.r,
                out.series.len(),
                out.excluded
            );
        }
        Command::Geo(a) => {
            let c = &a.common;
            let input = load(c)?;
            let g = &input.graph;
            let table = io::load_geo(&a.coords).with_context(|| format!("reading {}", a.coords.display()))?;
            let (coords, unmatched) = table.resolve(g);
            if !unmatched.is_empty() {
                eprintln!("{} coordinate labels match no node", unmatched.len());
            }
            let cmap = with_workers(workers(c), || curvatures(c, g))??;
            let scatter = geo_curvature_scatter(g, &cmap, &coords)?;
            let mut extra = input.source.clone();
            extra.push(("unmatched_labels".into(), unmatched.len().to_string()));
            say(&emit_series(c, "geo", &scatter.series, &extra)?);
            eprintln!("{} edges skipped for missing coordinates", scatter.skipped);
        }
        Command::Hyperbolicity(a) => {
            let c = &a.common;
            let input = load(c)?;
            let mode = match a.mode {
                ModeArg::Exact => DeltaMode::Exact { cap: a.cap },
                ModeArg::Sampled => DeltaMode::Sampled {
                    count: a.samples,
                    seed: c.seed,
                },
            };
            let r = with_workers(workers(c), || slim_triangle_delta(&input.graph, mode))??;
            let mut out = std::io::stdout().lock();
            match c.format {
                Format::Csv => {
                    writeln!(out, "delta,diameter,ratio,triples,exact")?;
                    writeln!(
                        out,
                        "{},{},{:.6},{},{}",
                        r.delta,
                        r.diameter,
                        r.ratio(),
                        r.triples,
                        r.exact
                    )?;
                }
                Format::Json => writeln!(out, "{}", serde_json::to_string(&r)?)?,
            }
        }
        Command::Bench(a) => {
            let c = &a.common;
            let input = load(c)?;
            let report = bench_edges(&input.graph, c.alpha, a.reps)?;
            say(&emit_series(c, "bench", &report.series, &input.source)?);
            println!(
                "r = {:.6} over {} edges, {:.3} s total",
                report.r,
                report.timings.len(),
                report.total_seconds
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let chain: Vec<String> = e.chain().map(|c| c.to_string()).collect();
            eprintln!("error: {}", chain.join(": "));
            ExitCode::from(1)
        }
    }
}
