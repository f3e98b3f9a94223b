//! Command-line front end. Each subcommand loads an optional TOML manifest,
//! applies flag overrides (flags win), runs one experiment and writes its
//! artifacts under the output directory.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::evaluation::{
    self, area_fill_cdf, density_stats, dual_degrees, fit_exponent, histogram_mode, pca_scree,
    pdf_symmetry_score, placement_pdf, scree_deviation, timing_benchmark, window_counts, Heatmap,
    Method, TimingRow, WindowShape,
};
use crate::geometry::PointSet;
use crate::io;
use crate::partitioner::{self, Algorithm, PartitionConfig, PartitionResult};
use crate::pso::{seeded_experiment_grid_with_records, FunctionKind, PsoSummary, RunRecord, TestFunction};
use crate::rng::child_seed;

#[derive(Debug, Parser)]
#[command(name = "swarmpart", version, about = "Repulsive-agent spatial partitioning experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run RAO or ONNRAO once and write the final points and the run trace.
    Partition(PartitionArgs),
    /// Spacing, density, scree and dual statistics of one placement.
    Evaluate(SourceArgs),
    /// Placement probability heatmaps over many trials.
    Pdf(PdfArgs),
    /// Area-fill coverage curves.
    Fill(FillArgs),
    /// PCA scree ratios of one placement.
    Scree(SourceArgs),
    /// Window density test of one placement.
    Density(SourceArgs),
    /// Voronoi-dual degree histogram of one placement.
    Duals(SourceArgs),
    /// Per-sweep timing grid over dimensions and agent counts.
    Bench(BenchArgs),
    /// PSO runs seeded by each placement method.
    Pso(PsoArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML experiment manifest.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Unit hypercube dimension (only when the manifest has no environment).
    #[arg(long)]
    pub dims: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub algo: Option<Algorithm>,
    #[arg(long)]
    pub agents: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Convergence tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Normalization tolerance.
    #[arg(long)]
    pub tol_norm: Option<f64>,
    #[arg(long)]
    pub expand_by: Option<f64>,
    /// Start from these points instead of a random placement.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Point set CSV to analyse; otherwise a placement is generated.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Placement method used when no points file is given.
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub agents: Option<usize>,
    /// Number of density windows.
    #[arg(long)]
    pub windows: Option<usize>,
    /// Density window area (default: feasible volume / agents).
    #[arg(long)]
    pub area: Option<f64>,
    #[arg(long)]
    pub shape: Option<WindowShape>,
    /// Raster resolution for the dual-degree count.
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PdfArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated methods.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub agents: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FillArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated methods.
    #[arg(long)]
    pub methods: Option<String>,
    #[arg(long)]
    pub agents: Option<usize>,
    #[arg(long)]
    pub executions: Option<usize>,
    #[arg(long)]
    pub outer_trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated algorithms.
    #[arg(long)]
    pub algos: Option<String>,
    /// Comma-separated dimensions.
    #[arg(long = "dim-list")]
    pub dim_list: Option<String>,
    /// Comma-separated agent counts.
    #[arg(long)]
    pub agents: Option<String>,
    #[arg(long)]
    pub iters: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PsoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated methods.
    #[arg(long)]
    pub methods: Option<String>,
    /// Comma-separated test functions.
    #[arg(long)]
    pub functions: Option<String>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub particles: Option<usize>,
    #[arg(long)]
    pub iters: Option<usize>,
    /// Omit per-run records from the JSON bundle.
    #[arg(long)]
    pub no_records: bool,
}

/// Parse a comma-separated list; an empty list is a usage error.
fn parse_list<T: std::str::FromStr<Err = Error>>(text: &str, what: &str) -> Result<Vec<T>> {
    let items: Vec<T> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if items.is_empty() {
        return Err(Error::InvalidConfig(format!("{what} list is empty")));
    }
    Ok(items)
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::InvalidConfig(format!("expected a non-negative integer, got `{s}`")))
}

fn require_non_empty<T>(items: &[T], what: &str) -> Result<()> {
    if items.is_empty() {
        return Err(Error::InvalidConfig(format!("{what} list is empty")));
    }
    Ok(())
}

fn load(common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(d) = common.dims {
        match &cfg.environment {
            None => cfg.environment = Some(Environment::unit(d)),
            Some(env) if env.dims() != d => {
                return Err(Error::DimensionMismatch {
                    expected: env.dims(),
                    actual: d,
                })
            }
            Some(_) => {}
        }
    }
    Ok(cfg)
}

/// Collects written artifact paths; every path is inside the output directory.
struct Outputs<'a> {
    cfg: &'a ExperimentConfig,
    written: Vec<PathBuf>,
}

impl<'a> Outputs<'a> {
    fn new(cfg: &'a ExperimentConfig) -> Self {
        Self {
            cfg,
            written: Vec::new(),
        }
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.cfg.output(name);
        io::write_json(&path, value)?;
        self.written.push(path);
        Ok(())
    }

    fn text(&mut self, name: &str, text: &str) -> Result<()> {
        let path = self.cfg.output(name);
        io::write_text(&path, text)?;
        self.written.push(path);
        Ok(())
    }

    fn points(&mut self, name: &str, points: &PointSet) -> Result<()> {
        self.text(name, &io::points_to_csv(points))
    }

    fn csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
        let path = self.cfg.output(name);
        io::write_csv_rows(&path, header, rows)?;
        self.written.push(path);
        Ok(())
    }
}

fn num(x: f64) -> String {
    io::format_coord(x)
}

/// Run a parsed command line; returns the artifacts written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match cli.command {
        Command::Partition(a) => cmd_partition(a),
        Command::Evaluate(a) => cmd_evaluate(a),
        Command::Pdf(a) => cmd_pdf(a),
        Command::Fill(a) => cmd_fill(a),
        Command::Scree(a) => cmd_scree(a),
        Command::Density(a) => cmd_density(a),
        Command::Duals(a) => cmd_duals(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Pso(a) => cmd_pso(a),
    }
}

#[derive(Serialize)]
struct PartitionDoc<'a> {
    seed: u64,
    config: &'a PartitionConfig,
    environment: &'a Environment,
    result: &'a PartitionResult,
}

fn cmd_partition(a: PartitionArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = load(&a.common)?;
    let p = &mut cfg.partition;
    if let Some(v) = a.algo {
        p.algorithm = v;
    }
    if let Some(v) = a.agents {
        p.agents = v;
    }
    if let Some(v) = a.max_iters {
        p.max_iters = v;
    }
    if let Some(v) = a.tol {
        p.tolerance_converge = v;
    }
    if let Some(v) = a.tol_norm {
        p.tolerance_normalization = v;
    }
    if let Some(v) = a.expand_by {
        p.expand_by = v;
    }
    if let Some(path) = a.input {
        cfg.points = Some(path);
    }
    cfg.partition.seed = cfg.seed;
    cfg.validate()?;
    let env = cfg.environment();
    let initial = match &cfg.points {
        Some(path) => {
            let pts = io::read_points_csv(path)?;
            cfg.partition.agents = pts.len();
            Some(pts)
        }
        None => None,
    };
    let result = partitioner::run(&cfg.partition, &env, initial)?;
    let mut out = Outputs::new(&cfg);
    out.points("points.csv", &result.points)?;
    out.json(
        "result.json",
        &PartitionDoc {
            seed: cfg.seed,
            config: &cfg.partition,
            environment: &env,
            result: &result,
        },
    )?;
    Ok(out.written)
}

fn source_config(a: &SourceArgs) -> Result<ExperimentConfig> {
    let mut cfg = load(&a.common)?;
    if let Some(p) = &a.points {
        cfg.points = Some(p.clone());
    }
    let e = &mut cfg.evaluation;
    if let Some(m) = a.method {
        e.method = m;
    }
    if let Some(n) = a.agents {
        e.agents = n;
    }
    if let Some(w) = a.windows {
        e.options.windows = w;
    }
    if a.area.is_some() {
        e.options.window_area = a.area;
    }
    if let Some(s) = a.shape {
        e.options.window_shape = s;
    }
    if let Some(r) = a.resolution {
        e.options.grid_resolution = r;
    }
    e.options.seed = child_seed(cfg.seed, "evaluate-windows", 0);
    cfg.validate()?;
    Ok(cfg)
}

/// The stored point set, or a fresh placement by the configured method.
fn source_points(cfg: &ExperimentConfig, env: &Environment) -> Result<PointSet> {
    let points = match &cfg.points {
        Some(path) => io::read_points_csv(path)?,
        None => evaluation::place(
            cfg.evaluation.method,
            cfg.evaluation.agents,
            env,
            &cfg.method_configs(),
            child_seed(cfg.seed, "evaluate-placement", 0),
        )?,
    };
    if points.dims() != env.dims() {
        return Err(Error::DimensionMismatch {
            expected: env.dims(),
            actual: points.dims(),
        });
    }
    Ok(points)
}

fn cmd_evaluate(a: SourceArgs) -> Result<Vec<PathBuf>> {
    let cfg = source_config(&a)?;
    let env = cfg.environment();
    let points = source_points(&cfg, &env)?;
    let report = evaluation::evaluate(&points, &env, &cfg.evaluation.options)?;
    let mut out = Outputs::new(&cfg);
    if cfg.points.is_none() {
        out.points("points.csv", &points)?;
    }
    out.json("evaluation.json", &report)?;
    Ok(out.written)
}

#[derive(Serialize)]
struct ScreeDoc {
    ratios: Vec<f64>,
    max_deviation_from_isotropic: f64,
}

fn cmd_scree(a: SourceArgs) -> Result<Vec<PathBuf>> {
    let cfg = source_config(&a)?;
    let env = cfg.environment();
    let points = source_points(&cfg, &env)?;
    let ratios = pca_scree(&points)?;
    let rows: Vec<Vec<String>> = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| vec![(i + 1).to_string(), num(*r)])
        .collect();
    let mut out = Outputs::new(&cfg);
    out.csv("scree.csv", &["component", "ratio"], &rows)?;
    out.json(
        "scree.json",
        &ScreeDoc {
            max_deviation_from_isotropic: scree_deviation(&ratios),
            ratios,
        },
    )?;
    Ok(out.written)
}

#[derive(Serialize)]
struct DensityDoc {
    window_area: f64,
    window_shape: WindowShape,
    windows: usize,
    mean: f64,
    variance: f64,
}

fn cmd_density(a: SourceArgs) -> Result<Vec<PathBuf>> {
    let cfg = source_config(&a)?;
    let env = cfg.environment();
    let points = source_points(&cfg, &env)?;
    let opts = &cfg.evaluation.options;
    let area = opts
        .window_area
        .unwrap_or_else(|| evaluation::default_window_area(&env, points.len()));
    let counts = window_counts(
        &points,
        &env,
        opts.windows,
        area,
        opts.window_shape,
        &mut crate::rng::seeded(opts.seed),
    )?;
    let stats = density_stats(&counts);
    let mut out = Outputs::new(&cfg);
    out.json(
        "density.json",
        &DensityDoc {
            window_area: area,
            window_shape: opts.window_shape,
            windows: stats.windows,
            mean: stats.mean,
            variance: stats.variance,
        },
    )?;
    Ok(out.written)
}

#[derive(Serialize)]
struct DualsDoc {
    agents: usize,
    grid_resolution: usize,
    histogram: BTreeMap<usize, usize>,
    modal_degree: Option<usize>,
    interior_histogram: BTreeMap<usize, usize>,
    interior_modal_degree: Option<usize>,
}

fn cmd_duals(a: SourceArgs) -> Result<Vec<PathBuf>> {
    let cfg = source_config(&a)?;
    let env = cfg.environment();
    let points = source_points(&cfg, &env)?;
    let res = cfg.evaluation.options.grid_resolution;
    let degrees = dual_degrees(&points, &env, res)?;
    let mut all = BTreeMap::new();
    let mut interior = BTreeMap::new();
    for d in &degrees {
        *all.entry(d.degree).or_insert(0) += 1;
        if !d.boundary {
            *interior.entry(d.degree).or_insert(0) += 1;
        }
    }
    let mut out = Outputs::new(&cfg);
    out.json(
        "duals.json",
        &DualsDoc {
            agents: points.len(),
            grid_resolution: res,
            modal_degree: histogram_mode(&all),
            histogram: all,
            interior_modal_degree: histogram_mode(&interior),
            interior_histogram: interior,
        },
    )?;
    Ok(out.written)
}

#[derive(Serialize)]
struct PdfDoc {
    agents: usize,
    trials: usize,
    symmetry_scores: BTreeMap<&'static str, f64>,
}

fn cmd_pdf(a: PdfArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = load(&a.common)?;
    if let Some(m) = &a.methods {
        cfg.pdf.methods = parse_list(m, "method")?;
    }
    if let Some(n) = a.agents {
        cfg.pdf.agents = n;
    }
    if let Some(t) = a.trials {
        cfg.pdf.trials = t;
    }
    require_non_empty(&cfg.pdf.methods, "method")?;
    cfg.validate()?;
    let env = cfg.environment();
    let mut out = Outputs::new(&cfg);
    let mut scores = BTreeMap::new();
    for &method in &cfg.pdf.methods {
        let h: Heatmap = placement_pdf(
            method,
            cfg.pdf.agents,
            cfg.pdf.trials,
            &env,
            &cfg.method_configs(),
            child_seed(cfg.seed, &format!("pdf-{}", method.name()), 0),
        )?;
        scores.insert(method.name(), pdf_symmetry_score(&h));
        out.text(&format!("pdf_{}.csv", method.name()), &h.to_csv())?;
    }
    out.json(
        "pdf.json",
        &PdfDoc {
            agents: cfg.pdf.agents,
            trials: cfg.pdf.trials,
            symmetry_scores: scores,
        },
    )?;
    Ok(out.written)
}

fn cmd_fill(a: FillArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = load(&a.common)?;
    if let Some(m) = &a.methods {
        cfg.fill.methods = parse_list(m, "method")?;
    }
    if let Some(n) = a.agents {
        cfg.fill.agents = n;
    }
    if let Some(n) = a.executions {
        cfg.fill.max_executions = n;
    }
    if let Some(n) = a.outer_trials {
        cfg.fill.outer_trials = n;
    }
    require_non_empty(&cfg.fill.methods, "method")?;
    cfg.validate()?;
    let env = cfg.environment();
    let mut rows = Vec::new();
    let mut curves = BTreeMap::new();
    for &method in &cfg.fill.methods {
        let curve = area_fill_cdf(
            method,
            cfg.fill.agents,
            &env,
            &cfg.method_configs(),
            cfg.fill.max_executions,
            cfg.fill.outer_trials,
            child_seed(cfg.seed, &format!("fill-{}", method.name()), 0),
        )?;
        for i in 0..curve.executions.len() {
            rows.push(vec![
                method.name().to_string(),
                curve.executions[i].to_string(),
                num(curve.mean[i]),
                num(curve.two_sigma[i]),
            ]);
        }
        curves.insert(method.name(), curve);
    }
    let mut out = Outputs::new(&cfg);
    out.csv("fill.csv", &["method", "executions", "mean_fraction", "two_sigma"], &rows)?;
    out.json("fill.json", &curves)?;
    Ok(out.written)
}

#[derive(Serialize)]
struct BenchDoc {
    rows: Vec<TimingRow>,
    /// Fitted exponent of seconds/sweep against agent count, per algorithm and dimension.
    agent_exponents: Vec<(Algorithm, usize, f64)>,
}

fn cmd_bench(a: BenchArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = load(&a.common)?;
    if let Some(s) = &a.algos {
        cfg.bench.algorithms = parse_list(s, "algorithm")?;
    }
    if let Some(s) = &a.dim_list {
        cfg.bench.dims = s.split(',').map(|x| parse_usize(x.trim())).collect::<Result<_>>()?;
    }
    if let Some(s) = &a.agents {
        cfg.bench.agents = s.split(',').map(|x| parse_usize(x.trim())).collect::<Result<_>>()?;
    }
    if let Some(n) = a.iters {
        cfg.bench.iters = n;
    }
    require_non_empty(&cfg.bench.algorithms, "algorithm")?;
    require_non_empty(&cfg.bench.dims, "dimension")?;
    require_non_empty(&cfg.bench.agents, "agent count")?;
    cfg.validate()?;
    let b = &cfg.bench;
    let rows = timing_benchmark(&b.algorithms, &b.dims, &b.agents, b.iters, cfg.seed)?;
    let mut exps = Vec::new();
    if b.agents.len() >= 2 {
        for &alg in &b.algorithms {
            for &d in &b.dims {
                let cell: Vec<&TimingRow> = rows.iter().filter(|r| r.algorithm == alg && r.dims == d).collect();
                let xs: Vec<f64> = cell.iter().map(|r| r.agents as f64).collect();
                let ys: Vec<f64> = cell.iter().map(|r| r.seconds_per_iter).collect();
                exps.push((alg, d, fit_exponent(&xs, &ys)));
            }
        }
    }
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.algorithm.name().to_string(),
                r.dims.to_string(),
                r.agents.to_string(),
                r.iterations.to_string(),
                num(r.seconds_per_iter),
            ]
        })
        .collect();
    let mut out = Outputs::new(&cfg);
    out.csv(
        "bench.csv",
        &["algorithm", "dims", "agents", "iterations", "seconds_per_iter"],
        &csv_rows,
    )?;
    out.json(
        "bench.json",
        &BenchDoc {
            rows,
            agent_exponents: exps,
        },
    )?;
    Ok(out.written)
}

#[derive(Serialize)]
struct PsoDoc<'a> {
    seed: u64,
    repeats: usize,
    summaries: &'a [PsoSummary],
    #[serde(skip_serializing_if = "Option::is_none")]
    records: Option<&'a [Vec<RunRecord>]>,
}

fn cmd_pso(a: PsoArgs) -> Result<Vec<PathBuf>> {
    let mut cfg = load(&a.common)?;
    if let Some(s) = &a.methods {
        cfg.pso.methods = parse_list(s, "method")?;
    }
    if let Some(s) = &a.functions {
        cfg.pso.functions = parse_list(s, "function")?;
    }
    if let Some(n) = a.repeats {
        cfg.pso.repeats = n;
    }
    if let Some(n) = a.particles {
        cfg.pso.swarm.particles = n;
    }
    if let Some(n) = a.iters {
        cfg.pso.swarm.max_iters = n;
    }
    if let Some(d) = a.common.dims {
        cfg.pso.dims = d;
    }
    if a.no_records {
        cfg.pso.records = false;
    }
    require_non_empty(&cfg.pso.methods, "method")?;
    require_non_empty(&cfg.pso.functions, "function")?;
    cfg.pso.swarm.seed = cfg.seed;
    cfg.validate()?;
    let functions: Vec<TestFunction> = cfg
        .pso
        .functions
        .iter()
        .map(|&k| TestFunction::standard(k, cfg.pso.dims))
        .collect();
    let (summaries, records) = seeded_experiment_grid_with_records(
        &cfg.pso.methods,
        &functions,
        cfg.pso.repeats,
        &cfg.pso.swarm,
        &cfg.method_configs(),
        cfg.seed,
    )?;

    let mut out = Outputs::new(&cfg);
    let long: Vec<Vec<String>> = summaries
        .iter()
        .map(|s| {
            vec![
                s.method.name().to_string(),
                s.function.name().to_string(),
                num(s.epsilon),
                num(s.success_rate),
                num(s.relative_nfe),
                num(s.efficiency),
                s.repeats.to_string(),
                s.seed.to_string(),
            ]
        })
        .collect();
    out.csv(
        "pso_summary.csv",
        &[
            "method",
            "function",
            "epsilon",
            "success_rate",
            "relative_nfe",
            "efficiency",
            "repeats",
            "seed",
        ],
        &long,
    )?;

    // Method rows × function columns of epsilon.
    let mut header = vec!["method"];
    header.extend(cfg.pso.functions.iter().map(|f| f.name()));
    let table: Vec<Vec<String>> = cfg
        .pso
        .methods
        .iter()
        .map(|&m| {
            let mut row = vec![m.name().to_string()];
            row.extend(cfg.pso.functions.iter().map(|&f: &FunctionKind| {
                summaries
                    .iter()
                    .find(|s| s.method == m && s.function == f)
                    .map_or_else(String::new, |s| num(s.epsilon))
            }));
            row
        })
        .collect();
    out.csv("pso_epsilon.csv", &header, &table)?;
    out.json(
        "pso.json",
        &PsoDoc {
            seed: cfg.seed,
            repeats: cfg.pso.repeats,
            summaries: &summaries,
            records: cfg.pso.records.then_some(records.as_slice()),
        },
    )?;
    Ok(out.written)
}

/// Cap the global worker pool from `SWARMPART_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SWARMPART_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::InvalidConfig(format!("SWARMPART_THREADS must be a positive integer, got `{v}`")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidConfig(format!("cannot configure worker threads: {e}")))?;
    }
    Ok(())
}
