//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 disconnected graph,
//! 3 validation failure, 4 simulation divergence.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::closedform::QuantityKind;
use crate::coherence::CoherenceReport;
use crate::export::{self, Table};
use crate::figures::{self, Figure, FigureParams};
use crate::graph::{self, Family, Graph};
use crate::metrics::{self, EmbeddingKind, MetricReport, Order};
use crate::oracles::{self, Dynamics, OracleError, SimulationConfig, Target};
use crate::spectral::SpectralDecomposition;
use crate::validation::{self, ValidationConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DISCONNECTED: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_DIVERGED: i32 = 4;

/// Parsed command line.
#[derive(Debug, Parser)]
#[command(name = "coherence-lab", version, about = "Biharmonic distances and noisy consensus variance on graphs")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a graph as JSON.
    Gen {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Distances, indices and variances for one graph (JSON).
    Analyze {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise distance matrix, or one pair with --pair.
    Distance {
        #[command(flatten)]
        graph: GraphSource,
        /// 1 = resistance, 2 = biharmonic.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        /// Report d_B^2 instead of d_B.
        #[arg(long)]
        squared: bool,
        #[arg(long, value_parser = parse_pair)]
        pair: Option<(usize, usize)>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Second-order variances (pairwise, vertex, total) and the first-order total.
    Coherence {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check the spectral pipeline against closed forms and the Lyapunov oracle.
    Validate {
        #[arg(long = "family", value_parser = parse_family)]
        families: Vec<Family>,
        #[arg(long = "quantity", value_parser = parse_quantity)]
        quantities: Vec<QuantityKind>,
        /// Single size; overrides --n-min/--n-max.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 3)]
        n_min: usize,
        #[arg(long, default_value_t = 64)]
        n_max: usize,
        #[arg(long, default_value_t = validation::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = 8)]
        lyapunov_max_n: usize,
        /// Multiply the first nonzero eigenvalue by this factor (sensitivity check).
        #[arg(long)]
        perturb: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo estimate of steady-state variances.
    Simulate {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
        order: u8,
        /// `total`, `vertex:J` or `pair:J,K`; repeatable.
        #[arg(long = "target", value_parser = parse_target)]
        targets: Vec<Target>,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 50.0)]
        t_burn: f64,
        #[arg(long, default_value_t = 500.0)]
        t_avg: f64,
        #[arg(long, default_value_t = 16)]
        runs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the step-size guard and rely on the divergence detector.
        #[arg(long)]
        no_step_guard: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data series for a plot (CSV).
    Figure {
        which: String,
        #[arg(long)]
        n: Option<usize>,
        /// Reference vertex for path_distances; repeatable.
        #[arg(long = "k")]
        ks: Vec<usize>,
        #[arg(long)]
        star_size: Option<usize>,
        #[arg(long)]
        path_len: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Principal components of the biharmonic or resistance embedding.
    Embed {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, value_enum, default_value_t = KindArg::Biharmonic)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Exactly one of a generator (`--family`) or a JSON file (`--file`).
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SourceChoice {
    /// complete, star, cycle, path, starry_line or ba.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GraphSource {
    #[command(flatten)]
    pub choice: SourceChoice,
    #[arg(long)]
    pub n: Option<usize>,
    /// Star size for starry_line.
    #[arg(long)]
    pub star_size: Option<usize>,
    /// Path length for starry_line.
    #[arg(long)]
    pub path_len: Option<usize>,
    /// Edges per new vertex for ba.
    #[arg(long)]
    pub m: Option<usize>,
    /// Seed for ba.
    #[arg(long)]
    pub graph_seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Biharmonic,
    Resistance,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: graph::GraphError| e.to_string())
}

fn parse_quantity(s: &str) -> Result<QuantityKind, String> {
    s.parse()
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected J,K, got `{s}`"))?;
    let j = a.trim().parse().map_err(|_| format!("bad vertex `{a}`"))?;
    let k = b.trim().parse().map_err(|_| format!("bad vertex `{b}`"))?;
    Ok((j, k))
}

fn parse_target(s: &str) -> Result<Target, String> {
    if s == "total" {
        return Ok(Target::Total);
    }
    if let Some(v) = s.strip_prefix("vertex:") {
        return v.parse().map(Target::Vertex).map_err(|_| format!("bad vertex `{v}`"));
    }
    if let Some(p) = s.strip_prefix("pair:") {
        return parse_pair(p).map(|(j, k)| Target::Pairwise(j, k));
    }
    Err(format!("target must be total, vertex:J or pair:J,K, got `{s}`"))
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn resolve_graph(src: &GraphSource) -> CliResult<Graph> {
    match (&src.choice.family, &src.choice.file) {
        (Some(name), None) => build_generator(name, src),
        (None, Some(path)) => Graph::load(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display()))),
        _ => Err(CliError::usage("exactly one of --family or --file is required")),
    }
}

fn build_generator(name: &str, p: &GraphSource) -> CliResult<Graph> {
    let need_n = || p.n.ok_or_else(|| CliError::usage(format!("--family {name} needs --n")));
    let g = match name {
        "starry_line" | "starry-line" => graph::starry_line(p.star_size.unwrap_or(20), p.path_len.unwrap_or(5))?,
        "ba" | "barabasi_albert" => {
            let seed = p.graph_seed.ok_or_else(|| CliError::usage("--family ba needs --graph-seed"))?;
            graph::barabasi_albert(need_n()?, p.m.unwrap_or(2), seed)?
        }
        other => other.parse::<Family>()?.generate(need_n()?)?,
    };
    Ok(g)
}

fn require_connected(g: &Graph) -> CliResult<()> {
    let c = g.component_count();
    if c != 1 {
        return Err(CliError { code: EXIT_DISCONNECTED, message: format!("graph is disconnected: {c} components") });
    }
    Ok(())
}

fn decompose(g: &Graph) -> CliResult<SpectralDecomposition> {
    require_connected(g)?;
    Ok(SpectralDecomposition::decompose(&g.laplacian())?)
}

fn sink(out: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> CliResult<()> {
    let mut w = sink(out)?;
    export::write_json(value, &mut w)?;
    w.flush()?;
    Ok(())
}

fn emit_table(t: &Table, out: Option<&Path>) -> CliResult<()> {
    let mut w = sink(out)?;
    t.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn emit_matrix(m: &[Vec<f64>], out: Option<&Path>) -> CliResult<()> {
    let mut w = sink(out)?;
    export::write_matrix_csv(m, &mut w)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    m: usize,
    eigenvalues: Vec<f64>,
    hso_total: f64,
    hfo_total: f64,
    d_b: Vec<Vec<f64>>,
    biharmonic: MetricReport,
    resistance: MetricReport,
    coherence: CoherenceReport,
}

fn order_of(v: u8) -> Order {
    if v == 1 {
        Order::Resistance
    } else {
        Order::Biharmonic
    }
}

fn cmd_analyze(g: &Graph, out: Option<&Path>) -> CliResult<()> {
    let sd = decompose(g)?;
    let biharmonic = MetricReport::compute(&sd, Order::Biharmonic)?;
    let resistance = MetricReport::compute(&sd, Order::Resistance)?;
    let coherence = CoherenceReport::compute(&sd);
    let n = g.n();
    let d_b = (0..n).map(|j| (0..n).map(|k| biharmonic.distance(j, k)).collect()).collect();
    let report = AnalyzeReport {
        n,
        m: g.m(),
        eigenvalues: sd.eigenvalues().to_vec(),
        hso_total: coherence.hso_total,
        hfo_total: coherence.hfo_total,
        d_b,
        biharmonic,
        resistance,
        coherence,
    };
    emit_json(&report, out)
}

#[derive(Serialize)]
struct PairDistance {
    j: usize,
    k: usize,
    order: Order,
    squared: bool,
    value: f64,
}

fn cmd_distance(g: &Graph, order: Order, squared: bool, pair: Option<(usize, usize)>, o: &OutputArgs) -> CliResult<()> {
    let sd = decompose(g)?;
    let value = |sq: f64| match (order, squared) {
        (Order::Biharmonic, false) => sq.sqrt(),
        _ => sq,
    };
    let out = o.out.as_deref();
    if let Some((j, k)) = pair {
        let v = value(metrics::squared_distance(&sd, order, j, k)?);
        return match o.format {
            Format::Json => emit_json(&PairDistance { j, k, order, squared, value: v }, out),
            Format::Csv => {
                let mut t = Table::new(["j", "k", "value"]);
                t.push(vec![j.into(), k.into(), v.into()]);
                emit_table(&t, out)
            }
        };
    }
    let report = MetricReport::compute(&sd, order)?;
    let matrix: Vec<Vec<f64>> = report.squared_distances.iter().map(|r| r.iter().map(|&x| value(x)).collect()).collect();
    match o.format {
        Format::Json => emit_json(&matrix, out),
        Format::Csv => emit_matrix(&matrix, out),
    }
}

fn cmd_coherence(g: &Graph, o: &OutputArgs) -> CliResult<()> {
    let report = CoherenceReport::compute(&decompose(g)?);
    match o.format {
        Format::Json => emit_json(&report, o.out.as_deref()),
        Format::Csv => emit_matrix(&report.hso_pairwise, o.out.as_deref()),
    }
}

fn cmd_simulate(g: &Graph, order: Dynamics, targets: Vec<Target>, cfg: SimulationConfig, out: Option<&Path>) -> CliResult<()> {
    require_connected(g)?;
    let targets = if targets.is_empty() { vec![Target::Total] } else { targets };
    if let Ok(spec) = crate::spectral::Spectrum::of(&g.laplacian()) {
        if let Some(l1) = spec.lambda_1() {
            if cfg.t_burn < 10.0 / l1 {
                eprintln!("warning: t_burn = {} is below 10/lambda_1 = {:.3}; estimates may be biased", cfg.t_burn, 10.0 / l1);
            }
        }
    }
    let estimates = oracles::simulate(g, order, &targets, &cfg).map_err(|e| match e {
        OracleError::UnstableStep { .. } | OracleError::Diverged { .. } => CliError { code: EXIT_DIVERGED, message: e.to_string() },
        OracleError::Disconnected(_) => CliError { code: EXIT_DISCONNECTED, message: e.to_string() },
        other => CliError::usage(other.to_string()),
    })?;
    emit_json(&estimates, out)
}

#[derive(Serialize)]
struct EmbedReport {
    kind: EmbeddingKind,
    variances: Vec<f64>,
    scores: Vec<Vec<f64>>,
}

fn cmd_embed(g: &Graph, kind: EmbeddingKind, dims: usize, o: &OutputArgs) -> CliResult<()> {
    let sd = decompose(g)?;
    let pcs = metrics::principal_components(&metrics::embed(&sd, kind), dims)?;
    let scores: Vec<Vec<f64>> = pcs.scores.rows().into_iter().map(|r| r.to_vec()).collect();
    match o.format {
        Format::Json => emit_json(&EmbedReport { kind, variances: pcs.variances, scores }, o.out.as_deref()),
        Format::Csv => {
            let mut t = Table::new(std::iter::once("j".to_string()).chain((1..=dims).map(|c| format!("pc{c}"))));
            for (j, row) in scores.iter().enumerate() {
                t.push(std::iter::once(j.into()).chain(row.iter().map(|&x| x.into())).collect());
            }
            emit_table(&t, o.out.as_deref())
        }
    }
}

fn execute(cfg: RunConfig) -> CliResult<()> {
    match cfg.command {
        Command::Gen { graph, out } => {
            let g = resolve_graph(&graph)?;
            emit_json(&g.to_file(), out.as_deref())
        }
        Command::Analyze { graph, out } => cmd_analyze(&resolve_graph(&graph)?, out.as_deref()),
        Command::Distance { graph, order, squared, pair, output } => {
            cmd_distance(&resolve_graph(&graph)?, order_of(order), squared, pair, &output)
        }
        Command::Coherence { graph, output } => cmd_coherence(&resolve_graph(&graph)?, &output),
        Command::Validate { families, quantities, n, n_min, n_max, tol, lyapunov_max_n, perturb, out } => {
            let defaults = ValidationConfig::default();
            let config = ValidationConfig {
                families: if families.is_empty() { defaults.families } else { families },
                sizes: match n {
                    Some(n) => vec![n],
                    None => (n_min..=n_max).collect(),
                },
                quantities: if quantities.is_empty() { defaults.quantities } else { quantities },
                tolerance: tol,
                lyapunov_max_n,
                perturbation: perturb,
            };
            let report = validation::run(&config);
            emit_json(&report, out.as_deref())?;
            eprintln!("{} checks, {} failures", report.checks.len(), report.failures);
            if report.passed() {
                Ok(())
            } else {
                Err(CliError { code: EXIT_VALIDATION, message: format!("{} checks exceeded tolerance {tol:e}", report.failures) })
            }
        }
        Command::Simulate { graph, order, targets, dt, t_burn, t_avg, runs, seed, no_step_guard, out } => {
            let g = resolve_graph(&graph)?;
            let dynamics = if order == 1 { Dynamics::FirstOrder } else { Dynamics::SecondOrder };
            let sim = SimulationConfig { dt, t_burn, t_avg, n_runs: runs, seed, enforce_step_bound: !no_step_guard };
            cmd_simulate(&g, dynamics, targets, sim, out.as_deref())
        }
        Command::Figure { which, n, ks, star_size, path_len, m, seed, out } => {
            let figure: Figure = which.parse()?;
            let table = figures::generate(figure, &FigureParams { n, ks, star_size, path_len, m, seed })?;
            emit_table(&table, out.as_deref())
        }
        Command::Embed { graph, kind, dims, output } => {
            let kind = match kind {
                KindArg::Biharmonic => EmbeddingKind::Biharmonic,
                KindArg::Resistance => EmbeddingKind::Resistance,
            };
            cmd_embed(&resolve_graph(&graph)?, kind, dims, &output)
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cfg) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_pair("3, 4").unwrap(), (3, 4));
        assert!(parse_pair("3").is_err());
        assert_eq!(parse_target("total").unwrap(), Target::Total);
        assert_eq!(parse_target("vertex:2").unwrap(), Target::Vertex(2));
        assert_eq!(parse_target("pair:0,1").unwrap(), Target::Pairwise(0, 1));
        assert!(parse_target("edge:1").is_err());
    }

    #[test]
    fn source_group_is_exclusive_and_required() {
        assert!(RunConfig::try_parse_from(["x", "analyze", "--n", "4"]).is_err());
        assert!(RunConfig::try_parse_from(["x", "analyze", "--family", "cycle", "--file", "g.json"]).is_err());
        assert!(RunConfig::try_parse_from(["x", "analyze", "--family", "cycle", "--n", "4"]).is_ok());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["x", "bogus"]), EXIT_USAGE);
        assert_eq!(run(["x", "figure", "fig9"]), EXIT_USAGE);
        assert_eq!(run(["x", "gen", "--family", "cycle"]), EXIT_USAGE);
        assert_eq!(run(["x", "gen", "--family", "ba", "--n", "10"]), EXIT_USAGE);
    }
}
