//! Global-best particle swarm optimization, standard benchmark functions and
//! an experiment harness comparing starting-position generators.

use std::f64::consts::{E, PI};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environment::{DomainBox, Environment};
use crate::error::{Error, Result};
use crate::evaluation::{place, Method, MethodConfigs};
use crate::geometry::PointSet;
use crate::rng::{child_seed, seeded};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Ackley,
    Griewank,
    Parabola,
    Rastrigin,
    Rosenbrock,
    Schwefel,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 6] = [
        FunctionKind::Ackley,
        FunctionKind::Griewank,
        FunctionKind::Parabola,
        FunctionKind::Rastrigin,
        FunctionKind::Rosenbrock,
        FunctionKind::Schwefel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FunctionKind::Ackley => "ackley",
            FunctionKind::Griewank => "griewank",
            FunctionKind::Parabola => "parabola",
            FunctionKind::Rastrigin => "rastrigin",
            FunctionKind::Rosenbrock => "rosenbrock",
            FunctionKind::Schwefel => "schwefel",
        }
    }

    /// Literature-standard search box, identical in every dimension.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            FunctionKind::Ackley => (-32.0, 32.0),
            FunctionKind::Griewank => (-600.0, 600.0),
            FunctionKind::Parabola => (-100.0, 100.0),
            FunctionKind::Rastrigin => (-5.12, 5.12),
            FunctionKind::Rosenbrock => (-5.0, 10.0),
            FunctionKind::Schwefel => (-500.0, 500.0),
        }
    }

    fn minimum_coordinate(self) -> f64 {
        match self {
            FunctionKind::Rosenbrock => 1.0,
            FunctionKind::Schwefel => SCHWEFEL_ARGMIN,
            _ => 0.0,
        }
    }
}

impl std::str::FromStr for FunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FunctionKind::ALL
            .into_iter()
            .find(|k| k.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidConfig(format!("unknown test function `{s}`")))
    }
}

const SCHWEFEL_ARGMIN: f64 = 420.9687;
const SCHWEFEL_OFFSET: f64 = 418.9829;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub kind: FunctionKind,
    pub domain: DomainBox,
    pub global_minimum_position: Vec<f64>,
    pub global_minimum_value: f64,
}

impl TestFunction {
    /// `kind` on its default box in `dims` dimensions.
    pub fn standard(kind: FunctionKind, dims: usize) -> Self {
        let (lo, hi) = kind.default_bounds();
        Self::with_domain(kind, DomainBox {
            lower: vec![lo; dims],
            upper: vec![hi; dims],
        })
    }

    pub fn with_domain(kind: FunctionKind, domain: DomainBox) -> Self {
        let position = vec![kind.minimum_coordinate(); domain.dims()];
        // The Schwefel constants are rounded, so its minimum is ~2.5e-5 per dimension.
        let value = raw_value(kind, &position);
        Self {
            kind,
            domain,
            global_minimum_position: position,
            global_minimum_value: if kind == FunctionKind::Schwefel { value } else { 0.0 },
        }
    }

    pub fn dims(&self) -> usize {
        self.domain.dims()
    }

    /// Objective value at `x`, clamped into the domain first.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        let mut y = x.to_vec();
        self.domain.clamp(&mut y);
        raw_value(self.kind, &y)
    }
}

fn raw_value(kind: FunctionKind, x: &[f64]) -> f64 {
    let n = x.len() as f64;
    match kind {
        FunctionKind::Parabola => x.iter().map(|v| v * v).sum(),
        FunctionKind::Rosenbrock => x
            .windows(2)
            .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
            .sum(),
        FunctionKind::Rastrigin => {
            10.0 * n + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
        }
        FunctionKind::Ackley => {
            let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
            let cs = x.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / n;
            -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
        }
        FunctionKind::Griewank => {
            let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
            let p: f64 = x
                .iter()
                .enumerate()
                .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                .product();
            1.0 + s - p
        }
        FunctionKind::Schwefel => {
            SCHWEFEL_OFFSET * n - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoConfig {
    pub particles: usize,
    pub max_iters: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub seed: u64,
    pub success_tolerance: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            particles: 50,
            max_iters: 100,
            inertia: 0.7298,
            cognitive: 1.4962,
            social: 1.4962,
            seed: 0,
            success_tolerance: 1e-3,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(Error::InvalidConfig("particles must be >= 2".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.success_tolerance >= 0.0) {
            return Err(Error::InvalidConfig("success_tolerance must be >= 0".into()));
        }
        Ok(())
    }

    /// Largest possible number of objective evaluations in one run.
    pub fn evaluation_budget(&self) -> usize {
        self.particles * (self.max_iters + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoResult {
    pub best_position: Vec<f64>,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub success: bool,
    pub iterations_run: usize,
    /// Global best value after initialization and after each iteration.
    pub best_trace: Vec<f64>,
}

/// Canonical global-best PSO starting from `initial` with zero velocities.
pub fn pso_run(f: &TestFunction, initial: &PointSet, cfg: &PsoConfig) -> Result<PsoResult> {
    cfg.validate()?;
    let dims = f.dims();
    if initial.dims() != dims {
        return Err(Error::DimensionMismatch {
            expected: dims,
            actual: initial.dims(),
        });
    }
    if initial.len() != cfg.particles {
        return Err(Error::InvalidConfig(format!(
            "expected {} initial positions, got {}",
            cfg.particles,
            initial.len()
        )));
    }
    let mut rng = seeded(cfg.seed);
    let n = cfg.particles;
    let mut x = initial.as_slice().to_vec();
    for p in x.chunks_exact_mut(dims) {
        f.domain.clamp(p);
    }
    let mut v = vec![0.0; n * dims];
    let mut pbest = x.clone();
    let mut pbest_val: Vec<f64> = x.chunks_exact(dims).map(|p| f.evaluate(p)).collect();
    let mut evaluations = n;
    let mut g = argmin(&pbest_val);
    let mut trace = vec![pbest_val[g]];
    let target = f.global_minimum_value + cfg.success_tolerance;
    let mut iterations = 0;

    while pbest_val[g] > target && iterations < cfg.max_iters {
        iterations += 1;
        let gbest = pbest[g * dims..(g + 1) * dims].to_vec();
        for i in 0..n {
            for d in 0..dims {
                let k = i * dims + d;
                let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
                v[k] = cfg.inertia * v[k]
                    + cfg.cognitive * r1 * (pbest[k] - x[k])
                    + cfg.social * r2 * (gbest[d] - x[k]);
                x[k] += v[k];
                if x[k] < f.domain.lower[d] {
                    x[k] = f.domain.lower[d];
                    v[k] = 0.0;
                } else if x[k] > f.domain.upper[d] {
                    x[k] = f.domain.upper[d];
                    v[k] = 0.0;
                }
            }
            let val = f.evaluate(&x[i * dims..(i + 1) * dims]);
            evaluations += 1;
            if val < pbest_val[i] {
                pbest_val[i] = val;
                pbest[i * dims..(i + 1) * dims].copy_from_slice(&x[i * dims..(i + 1) * dims]);
            }
        }
        g = argmin(&pbest_val);
        trace.push(pbest_val[g]);
    }

    Ok(PsoResult {
        best_position: pbest[g * dims..(g + 1) * dims].to_vec(),
        best_value: pbest_val[g],
        evaluations_used: evaluations,
        success: pbest_val[g] <= target,
        iterations_run: iterations,
        best_trace: trace,
    })
}

fn argmin(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x < xs[best] {
            best = i;
        }
    }
    best
}

/// Map points from the unit box affinely onto `domain`.
pub fn map_from_unit(points: &PointSet, domain: &DomainBox) -> PointSet {
    let dims = points.dims();
    let mut out = points.clone();
    for i in 0..out.len() {
        let p = out.point_mut(i);
        for d in 0..dims {
            p[d] = domain.lower[d] + p[d] * domain.extent(d);
        }
    }
    out
}

/// Aggregate of many PSO runs from one starting-position method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsoSummary {
    pub method: Method,
    pub function: FunctionKind,
    /// Mean over coordinates of |mean best coordinate − true minimum coordinate|.
    pub epsilon: f64,
    pub success_rate: f64,
    pub mean_nfe: f64,
    /// `mean_nfe` divided by the largest `mean_nfe` among compared methods.
    pub relative_nfe: f64,
    /// `success_rate * (1 - mean NFE of successful runs / evaluation budget)`.
    pub efficiency: f64,
    pub repeats: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub repeat: usize,
    pub best_position: Vec<f64>,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub success: bool,
}

/// Mean absolute deviation of the mean best position from the true minimum,
/// averaged over coordinates.
pub fn epsilon(best_positions: &[Vec<f64>], truth: &[f64]) -> f64 {
    let n = best_positions.len() as f64;
    truth
        .iter()
        .enumerate()
        .map(|(d, t)| (best_positions.iter().map(|b| b[d]).sum::<f64>() / n - t).abs())
        .sum::<f64>()
        / truth.len() as f64
}

/// Run `repeats` PSO optimizations of `f`, each started from a fresh
/// placement by `method` (computed in the unit box and mapped onto the
/// function domain). Repeats run in parallel with per-repeat seeds.
pub fn seeded_experiment(
    method: Method,
    f: &TestFunction,
    repeats: usize,
    cfg: &PsoConfig,
    configs: &MethodConfigs,
    seed: u64,
) -> Result<(PsoSummary, Vec<RunRecord>)> {
    cfg.validate()?;
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be >= 1".into()));
    }
    let unit = Environment::unit(f.dims());
    let records: Vec<RunRecord> = (0..repeats)
        .into_par_iter()
        .map(|r| {
            let start = place(
                method,
                cfg.particles,
                &unit,
                configs,
                child_seed(seed, &format!("pso-start-{}", method.name()), r as u64),
            )?;
            let run_cfg = PsoConfig {
                seed: child_seed(seed, "pso-run", r as u64),
                ..cfg.clone()
            };
            let res = pso_run(f, &map_from_unit(&start, &f.domain), &run_cfg)?;
            Ok(RunRecord {
                repeat: r,
                best_position: res.best_position,
                best_value: res.best_value,
                evaluations_used: res.evaluations_used,
                success: res.success,
            })
        })
        .collect::<Result<_>>()?;
    Ok((summarize(method, f, cfg, seed, &records), records))
}

/// Every (method, function) cell of a comparison grid. Each repeat's
/// starting placement depends only on the method, seed and repeat index, so
/// one placement serves all functions of the same dimension.
pub fn seeded_experiment_grid(
    methods: &[Method],
    functions: &[TestFunction],
    repeats: usize,
    cfg: &PsoConfig,
    configs: &MethodConfigs,
    seed: u64,
) -> Result<Vec<PsoSummary>> {
    Ok(seeded_experiment_grid_with_records(methods, functions, repeats, cfg, configs, seed)?.0)
}

/// [`seeded_experiment_grid`] that also returns the per-run records of each
/// summary, aligned by index.
pub fn seeded_experiment_grid_with_records(
    methods: &[Method],
    functions: &[TestFunction],
    repeats: usize,
    cfg: &PsoConfig,
    configs: &MethodConfigs,
    seed: u64,
) -> Result<(Vec<PsoSummary>, Vec<Vec<RunRecord>>)> {
    cfg.validate()?;
    if methods.is_empty() || functions.is_empty() {
        return Err(Error::InvalidConfig("method and function lists must be non-empty".into()));
    }
    if repeats == 0 {
        return Err(Error::InvalidConfig("repeats must be >= 1".into()));
    }
    let mut out = Vec::new();
    let mut all_records = Vec::new();
    for &method in methods {
        let mut records: Vec<Vec<RunRecord>> = vec![Vec::with_capacity(repeats); functions.len()];
        let per_repeat: Vec<Vec<RunRecord>> = (0..repeats)
            .into_par_iter()
            .map(|r| {
                let mut starts: Vec<(usize, PointSet)> = Vec::new();
                functions
                    .iter()
                    .map(|f| {
                        let start = match starts.iter().find(|(d, _)| *d == f.dims()) {
                            Some((_, s)) => s.clone(),
                            None => {
                                let s = place(
                                    method,
                                    cfg.particles,
                                    &Environment::unit(f.dims()),
                                    configs,
                                    child_seed(seed, &format!("pso-start-{}", method.name()), r as u64),
                                )?;
                                starts.push((f.dims(), s.clone()));
                                s
                            }
                        };
                        let run_cfg = PsoConfig {
                            seed: child_seed(seed, "pso-run", r as u64),
                            ..cfg.clone()
                        };
                        let res = pso_run(f, &map_from_unit(&start, &f.domain), &run_cfg)?;
                        Ok(RunRecord {
                            repeat: r,
                            best_position: res.best_position,
                            best_value: res.best_value,
                            evaluations_used: res.evaluations_used,
                            success: res.success,
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for row in per_repeat {
            for (k, rec) in row.into_iter().enumerate() {
                records[k].push(rec);
            }
        }
        for (f, recs) in functions.iter().zip(records) {
            out.push(summarize(method, f, cfg, seed, &recs));
            all_records.push(recs);
        }
    }
    fill_relative_nfe(&mut out);
    Ok((out, all_records))
}

fn summarize(method: Method, f: &TestFunction, cfg: &PsoConfig, seed: u64, records: &[RunRecord]) -> PsoSummary {
    let n = records.len() as f64;
    let positions: Vec<Vec<f64>> = records.iter().map(|r| r.best_position.clone()).collect();
    let successes: Vec<&RunRecord> = records.iter().filter(|r| r.success).collect();
    let success_rate = successes.len() as f64 / n;
    let mean_nfe = records.iter().map(|r| r.evaluations_used as f64).sum::<f64>() / n;
    let efficiency = if successes.is_empty() {
        0.0
    } else {
        let s_nfe = successes.iter().map(|r| r.evaluations_used as f64).sum::<f64>() / successes.len() as f64;
        success_rate * (1.0 - s_nfe / cfg.evaluation_budget() as f64)
    };
    PsoSummary {
        method,
        function: f.kind,
        epsilon: epsilon(&positions, &f.global_minimum_position),
        success_rate,
        mean_nfe,
        relative_nfe: 1.0,
        efficiency,
        repeats: records.len(),
        seed,
    }
}

/// Set `relative_nfe` of each summary against the largest mean NFE among
/// summaries for the same function.
pub fn fill_relative_nfe(summaries: &mut [PsoSummary]) {
    let maxima: Vec<(FunctionKind, f64)> = FunctionKind::ALL
        .iter()
        .map(|&k| {
            let m = summaries
                .iter()
                .filter(|s| s.function == k)
                .map(|s| s.mean_nfe)
                .fold(0.0, f64::max);
            (k, m)
        })
        .collect();
    for s in summaries.iter_mut() {
        let max = maxima.iter().find(|(k, _)| *k == s.function).map_or(0.0, |m| m.1);
        s.relative_nfe = if max > 0.0 { s.mean_nfe / max } else { 0.0 };
    }
}
