//! Spatial statistics for comparing placements: spacing uniformity, window
//! density counts, placement heatmaps, area coverage, PCA scree ratios,
//! raster Voronoi adjacency and per-sweep timing.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cvt::{run_cvt, CvtConfig};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::geometry::{distance, distance_sq, two_nearest_neighbors, PointSet};
use crate::partitioner::{self, initialize, sweep, Algorithm, PartitionConfig};
use crate::rng::{child_seed, seeded, SwarmRng};

/// Side length (in bins) of placement heatmaps.
pub const HEATMAP_BINS: usize = 100;

/// Coefficient of variation of nearest and next-nearest neighbor distances.
pub fn nn_cv(points: &PointSet) -> Result<(f64, f64)> {
    points.require(3)?;
    let n = points.len();
    let mut nn = Vec::with_capacity(n);
    let mut next = Vec::with_capacity(n);
    for p in 0..n {
        let (a, b) = two_nearest_neighbors(points, p)?;
        nn.push(distance(points.point(p), points.point(a)));
        next.push(distance(points.point(p), points.point(b)));
    }
    Ok((coefficient_of_variation(&nn)?, coefficient_of_variation(&next)?))
}

/// Population standard deviation over mean.
fn coefficient_of_variation(xs: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if mean <= 0.0 {
        return Err(Error::Degenerate("all agents coincide".into()));
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok(var.sqrt() / mean)
}

/// Mean nearest-neighbor distance.
pub fn mean_nn_distance(points: &PointSet) -> Result<f64> {
    points.require(2)?;
    let nn = crate::geometry::nearest_neighbors(points)?;
    Ok(nn
        .iter()
        .enumerate()
        .map(|(p, &j)| distance(points.point(p), points.point(j)))
        .sum::<f64>()
        / points.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowShape {
    Circle,
    Square,
}

impl std::str::FromStr for WindowShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "circle" => Ok(WindowShape::Circle),
            "square" => Ok(WindowShape::Square),
            other => Err(Error::InvalidConfig(format!("unknown window shape `{other}`"))),
        }
    }
}

/// Sample mean and variance of agent counts over random windows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityStats {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub windows: usize,
}

/// Window volume with an expected count of one agent.
pub fn default_window_area(env: &Environment, agents: usize) -> f64 {
    env.feasible_volume() / agents.max(1) as f64
}

/// Volume of the unit ball in `dims` dimensions.
fn unit_ball_volume(dims: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = 2π/n · V_{n-2}
    let mut v = [1.0, 2.0];
    for n in 2..=dims {
        v[n % 2] *= 2.0 * std::f64::consts::PI / n as f64;
    }
    v[dims % 2]
}

/// Half-width of a window of the given volume (half side for squares, radius for circles).
fn window_half_width(shape: WindowShape, dims: usize, area: f64) -> f64 {
    match shape {
        WindowShape::Square => area.powf(1.0 / dims as f64) / 2.0,
        WindowShape::Circle => (area / unit_ball_volume(dims)).powf(1.0 / dims as f64),
    }
}

/// Counts agents inside `n_windows` windows placed uniformly so that each
/// lies entirely inside the domain.
pub fn window_counts<R: Rng + ?Sized>(
    points: &PointSet,
    env: &Environment,
    n_windows: usize,
    window_area: f64,
    shape: WindowShape,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let dims = env.dims();
    if points.dims() != dims {
        return Err(Error::DimensionMismatch {
            expected: dims,
            actual: points.dims(),
        });
    }
    if !(window_area > 0.0 && window_area.is_finite()) {
        return Err(Error::InvalidConfig("window area must be > 0".into()));
    }
    let h = window_half_width(shape, dims, window_area);
    if (0..dims).any(|d| 2.0 * h > env.domain.extent(d)) {
        return Err(Error::WindowTooLarge { area: window_area });
    }
    let mut center = vec![0.0; dims];
    let mut counts = Vec::with_capacity(n_windows);
    for _ in 0..n_windows {
        for (d, c) in center.iter_mut().enumerate() {
            let lo = env.domain.lower[d] + h;
            let hi = env.domain.upper[d] - h;
            *c = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        }
        let inside = points
            .iter()
            .filter(|p| match shape {
                WindowShape::Square => (0..dims).all(|d| (p[d] - center[d]).abs() <= h),
                WindowShape::Circle => distance_sq(p, &center) <= h * h,
            })
            .count();
        counts.push(inside);
    }
    Ok(counts)
}

/// Mean and variance of agent counts in random windows.
pub fn window_density_test<R: Rng + ?Sized>(
    points: &PointSet,
    env: &Environment,
    n_windows: usize,
    window_area: f64,
    shape: WindowShape,
    rng: &mut R,
) -> Result<DensityStats> {
    let counts = window_counts(points, env, n_windows, window_area, shape, rng)?;
    Ok(density_stats(&counts))
}

pub fn density_stats(counts: &[usize]) -> DensityStats {
    let n = counts.len();
    if n == 0 {
        return DensityStats {
            mean: 0.0,
            variance: 0.0,
            windows: 0,
        };
    }
    let mean = counts.iter().sum::<usize>() as f64 / n as f64;
    let variance = if n > 1 {
        counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    DensityStats {
        mean,
        variance,
        windows: n,
    }
}

/// Welch's two-sample t statistic for a difference of means.
pub fn welch_t(a: &DensityStats, b: &DensityStats) -> f64 {
    let se = (a.variance / a.windows as f64 + b.variance / b.windows as f64).sqrt();
    if se == 0.0 {
        if a.mean == b.mean {
            0.0
        } else {
            f64::INFINITY.copysign(a.mean - b.mean)
        }
    } else {
        (a.mean - b.mean) / se
    }
}

/// Placement generator used by the multi-run statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Random,
    Cvt,
    Rao,
    Onnrao,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Random, Method::Cvt, Method::Rao, Method::Onnrao];

    pub fn name(self) -> &'static str {
        match self {
            Method::Random => "random",
            Method::Cvt => "cvt",
            Method::Rao => "rao",
            Method::Onnrao => "onnrao",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Method::Random),
            "cvt" => Ok(Method::Cvt),
            "rao" => Ok(Method::Rao),
            "onnrao" => Ok(Method::Onnrao),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Settings shared by every run of a method; agent count and seed are set per run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MethodConfigs {
    pub partition: PartitionConfig,
    pub cvt: CvtConfig,
}

/// Produce one placement of `agents` points with the given method.
pub fn place(
    method: Method,
    agents: usize,
    env: &Environment,
    configs: &MethodConfigs,
    seed: u64,
) -> Result<PointSet> {
    match method {
        Method::Random => env.sample_points(agents, &mut seeded(seed)),
        Method::Cvt => {
            let cfg = CvtConfig {
                generators: agents,
                seed,
                ..configs.cvt.clone()
            };
            run_cvt(&cfg, env, None)
        }
        Method::Rao | Method::Onnrao => {
            let algorithm = if method == Method::Rao {
                Algorithm::Rao
            } else {
                Algorithm::Onnrao
            };
            let cfg = PartitionConfig {
                algorithm,
                agents,
                seed,
                ..configs.partition.clone()
            };
            Ok(partitioner::run(&cfg, env, None)?.points)
        }
    }
}

/// Probability of an agent landing in each cell of a 100×100 grid over the domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Heatmap {
    /// Row-major, row = second coordinate bin, column = first coordinate bin.
    pub bins: Vec<f64>,
    pub trials: usize,
    pub agents_per_trial: usize,
}

impl Heatmap {
    pub fn side(&self) -> usize {
        (self.bins.len() as f64).sqrt().round() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.bins[row * self.side() + col]
    }

    /// Grid as CSV text: one line per row, no header.
    pub fn to_csv(&self) -> String {
        let n = self.side();
        let mut out = String::new();
        for r in 0..n {
            let row: Vec<String> = (0..n).map(|c| format!("{:e}", self.get(r, c))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Flat bin index of a point, using its first two coordinates.
fn bin_of(env: &Environment, p: &[f64], side: usize) -> usize {
    let idx = |d: usize| {
        let t = (p[d] - env.domain.lower[d]) / env.domain.extent(d);
        ((t * side as f64).floor() as isize).clamp(0, side as isize - 1) as usize
    };
    idx(1) * side + idx(0)
}

fn require_planar(env: &Environment) -> Result<()> {
    if env.dims() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: env.dims(),
        });
    }
    Ok(())
}

/// Run `trials` independent placements (in parallel, seeds derived from
/// `seed`) and bin every final agent into a normalized heatmap.
pub fn placement_pdf(
    method: Method,
    agents: usize,
    trials: usize,
    env: &Environment,
    configs: &MethodConfigs,
    seed: u64,
) -> Result<Heatmap> {
    require_planar(env)?;
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    let side = HEATMAP_BINS;
    let runs: Vec<PointSet> = (0..trials as u64)
        .into_par_iter()
        .map(|t| place(method, agents, env, configs, child_seed(seed, "pdf", t)))
        .collect::<Result<_>>()?;
    let mut counts = vec![0u64; side * side];
    for pts in &runs {
        for p in pts.iter() {
            counts[bin_of(env, p, side)] += 1;
        }
    }
    let total = (trials * agents) as f64;
    Ok(Heatmap {
        bins: counts.iter().map(|&c| c as f64 / total).collect(),
        trials,
        agents_per_trial: agents,
    })
}

/// Index map for the 8 symmetries of a square grid.
fn dihedral(k: usize, r: usize, c: usize, n: usize) -> (usize, usize) {
    let (mut a, mut b) = if k & 4 != 0 { (c, r) } else { (r, c) };
    if k & 1 != 0 {
        a = n - 1 - a;
    }
    if k & 2 != 0 {
        b = n - 1 - b;
    }
    (a, b)
}

/// Apply dihedral symmetry `k` (0..8) to a heatmap.
pub fn transform_heatmap(h: &Heatmap, k: usize) -> Heatmap {
    let n = h.side();
    let mut bins = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let (a, b) = dihedral(k, r, c, n);
            bins[a * n + b] = h.bins[r * n + c];
        }
    }
    Heatmap { bins, ..h.clone() }
}

/// Mean absolute deviation of a heatmap from its dihedral average, relative
/// to the mean bin value. Zero for a perfectly symmetric heatmap.
pub fn pdf_symmetry_score(h: &Heatmap) -> f64 {
    let n = h.side();
    let mut avg = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            let v = h.bins[r * n + c] / 8.0;
            for k in 0..8 {
                let (a, b) = dihedral(k, r, c, n);
                avg[a * n + b] += v;
            }
        }
    }
    let mean_bin = h.bins.iter().sum::<f64>() / h.bins.len() as f64;
    if mean_bin == 0.0 {
        return 0.0;
    }
    let mad = h
        .bins
        .iter()
        .zip(&avg)
        .map(|(x, y)| (x - y).abs())
        .sum::<f64>()
        / h.bins.len() as f64;
    mad / mean_bin
}

/// Cumulative fraction of heatmap bins ever occupied, per execution count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FillCurve {
    pub executions: Vec<usize>,
    pub mean: Vec<f64>,
    /// Two standard deviations across outer trials.
    pub two_sigma: Vec<f64>,
    pub outer_trials: usize,
}

/// One coverage series: visited fraction after each of `max_executions` runs.
pub fn area_fill_series(
    method: Method,
    agents: usize,
    env: &Environment,
    configs: &MethodConfigs,
    max_executions: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    require_planar(env)?;
    let side = HEATMAP_BINS;
    let mut visited = vec![false; side * side];
    let mut count = 0usize;
    let mut out = Vec::with_capacity(max_executions);
    for e in 0..max_executions as u64 {
        let pts = place(method, agents, env, configs, child_seed(seed, "fill", e))?;
        for p in pts.iter() {
            let b = bin_of(env, p, side);
            if !visited[b] {
                visited[b] = true;
                count += 1;
            }
        }
        out.push(count as f64 / (side * side) as f64);
    }
    Ok(out)
}

/// Coverage curve averaged over `outer_trials` independent series, with a 2σ band.
pub fn area_fill_cdf(
    method: Method,
    agents: usize,
    env: &Environment,
    configs: &MethodConfigs,
    max_executions: usize,
    outer_trials: usize,
    seed: u64,
) -> Result<FillCurve> {
    if max_executions == 0 || outer_trials == 0 {
        return Err(Error::InvalidConfig(
            "max_executions and outer_trials must be >= 1".into(),
        ));
    }
    let series: Vec<Vec<f64>> = (0..outer_trials as u64)
        .into_par_iter()
        .map(|t| {
            area_fill_series(
                method,
                agents,
                env,
                configs,
                max_executions,
                child_seed(seed, "fill-trial", t),
            )
        })
        .collect::<Result<_>>()?;
    let n = outer_trials as f64;
    let mut mean = vec![0.0; max_executions];
    let mut two_sigma = vec![0.0; max_executions];
    for e in 0..max_executions {
        let m = series.iter().map(|s| s[e]).sum::<f64>() / n;
        let var = if outer_trials > 1 {
            series.iter().map(|s| (s[e] - m).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        mean[e] = m;
        two_sigma[e] = 2.0 * var.sqrt();
    }
    Ok(FillCurve {
        executions: (1..=max_executions).collect(),
        mean,
        two_sigma,
        outer_trials,
    })
}

/// Covariance eigenvalues as fractions of the total variance, descending.
pub fn pca_scree(points: &PointSet) -> Result<Vec<f64>> {
    let dims = points.dims();
    let n = points.len();
    if n <= dims {
        return Err(Error::InsufficientAgents {
            required: dims + 1,
            actual: n,
        });
    }
    let mut mean = vec![0.0; dims];
    for p in points.iter() {
        for d in 0..dims {
            mean[d] += p[d];
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = DMatrix::<f64>::zeros(dims, dims);
    for p in points.iter() {
        for a in 0..dims {
            for b in 0..dims {
                cov[(a, b)] += (p[a] - mean[a]) * (p[b] - mean[b]);
            }
        }
    }
    cov /= (n - 1) as f64;
    let mut eig: Vec<f64> = SymmetricEigen::new(cov)
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0))
        .collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = eig.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("all agents coincide".into()));
    }
    Ok(eig.iter().map(|v| v / total).collect())
}

/// Largest deviation of scree ratios from the isotropic value 1/D.
pub fn scree_deviation(ratios: &[f64]) -> f64 {
    let iso = 1.0 / ratios.len() as f64;
    ratios.iter().map(|r| (r - iso).abs()).fold(0.0, f64::max)
}

/// Raster Voronoi adjacency of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualDegree {
    pub degree: usize,
    /// Whether the agent's raster cell touches the domain edge or an obstacle.
    pub boundary: bool,
}

/// Label a `resolution²` raster by nearest agent and count, for every agent,
/// the distinct agents whose cells share a raster edge with its cell.
pub fn dual_degrees(points: &PointSet, env: &Environment, resolution: usize) -> Result<Vec<DualDegree>> {
    require_planar(env)?;
    if points.dims() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: points.dims(),
        });
    }
    if resolution < 2 {
        return Err(Error::InvalidConfig("grid resolution must be >= 2".into()));
    }
    let n = points.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    const NONE: usize = usize::MAX;
    let (lo, ext) = (&env.domain.lower, [env.domain.extent(0), env.domain.extent(1)]);
    let labels: Vec<usize> = (0..resolution)
        .into_par_iter()
        .flat_map_iter(|r| {
            (0..resolution).map(move |c| {
                let x = [
                    lo[0] + (c as f64 + 0.5) / resolution as f64 * ext[0],
                    lo[1] + (r as f64 + 0.5) / resolution as f64 * ext[1],
                ];
                if env.obstacles.iter().any(|o| o.contains_interior(&x)) {
                    return NONE;
                }
                let mut best = NONE;
                let mut best_d = f64::INFINITY;
                for (i, p) in points.iter().enumerate() {
                    let d = distance_sq(p, &x);
                    if d < best_d {
                        best_d = d;
                        best = i;
                    }
                }
                best
            })
        })
        .collect();

    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut boundary = vec![false; n];
    let at = |r: usize, c: usize| labels[r * resolution + c];
    for r in 0..resolution {
        for c in 0..resolution {
            let a = at(r, c);
            if a == NONE {
                continue;
            }
            if r == 0 || c == 0 || r + 1 == resolution || c + 1 == resolution {
                boundary[a] = true;
            }
            for (rr, cc) in [(r + 1, c), (r, c + 1)] {
                if rr >= resolution || cc >= resolution {
                    continue;
                }
                let b = at(rr, cc);
                if b == NONE {
                    boundary[a] = true;
                } else if b != a {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
            if (r > 0 && at(r - 1, c) == NONE) || (c > 0 && at(r, c - 1) == NONE) {
                boundary[a] = true;
            }
        }
    }
    Ok(adj
        .iter()
        .zip(boundary)
        .map(|(s, b)| DualDegree {
            degree: s.len(),
            boundary: b,
        })
        .collect())
}

/// Histogram degree → number of agents with that many raster Voronoi neighbors.
pub fn dual_degree_histogram(
    points: &PointSet,
    env: &Environment,
    grid_resolution: usize,
) -> Result<BTreeMap<usize, usize>> {
    Ok(histogram(dual_degrees(points, env, grid_resolution)?.iter().map(|d| d.degree)))
}

/// Same as [`dual_degree_histogram`] restricted to agents whose cells do not
/// touch the boundary.
pub fn interior_dual_degree_histogram(
    points: &PointSet,
    env: &Environment,
    grid_resolution: usize,
) -> Result<BTreeMap<usize, usize>> {
    Ok(histogram(
        dual_degrees(points, env, grid_resolution)?
            .iter()
            .filter(|d| !d.boundary)
            .map(|d| d.degree),
    ))
}

fn histogram(it: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for d in it {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

/// Most frequent key; ties go to the smaller degree.
pub fn histogram_mode(h: &BTreeMap<usize, usize>) -> Option<usize> {
    h.iter()
        .fold(None, |best: Option<(usize, usize)>, (&k, &v)| match best {
            Some((_, bv)) if bv >= v => best,
            _ => Some((k, v)),
        })
        .map(|(k, _)| k)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub algorithm: Algorithm,
    pub dims: usize,
    pub agents: usize,
    pub iterations: usize,
    pub seconds_per_iter: f64,
}

/// Wall-clock seconds per sweep for every (algorithm, D, P) cell. Each cell
/// starts from seeded normalized points and runs exactly `iters` sweeps
/// while the expansion factor grows by the default schedule.
pub fn timing_benchmark(
    algorithms: &[Algorithm],
    dims: &[usize],
    agent_counts: &[usize],
    iters: usize,
    seed: u64,
) -> Result<Vec<TimingRow>> {
    let mut rows = Vec::new();
    for &algorithm in algorithms {
        for &d in dims {
            for &p in agent_counts {
                let env = Environment::unit(d);
                let mut rng: SwarmRng = seeded(child_seed(seed, "bench", (d * 1000 + p) as u64));
                let mut points = env.sample_points(p, &mut rng)?;
                initialize(
                    &mut points,
                    &env,
                    partitioner::DEFAULT_TOLERANCE_NORMALIZATION,
                    partitioner::DEFAULT_MAX_ITERS,
                    &mut rng,
                )?;
                let step = partitioner::DEFAULT_TOLERANCE_CONVERGE * partitioner::DEFAULT_EXPAND_BY;
                let start = Instant::now();
                for i in 0..iters {
                    sweep(algorithm, &mut points, &env, 1.0 + step * (i + 1) as f64, &mut rng)?;
                }
                let secs = start.elapsed().as_secs_f64();
                rows.push(TimingRow {
                    algorithm,
                    dims: d,
                    agents: p,
                    iterations: iters,
                    seconds_per_iter: secs / iters.max(1) as f64,
                });
            }
        }
    }
    Ok(rows)
}

/// Least-squares slope of log(y) against log(x).
pub fn fit_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Summary statistics of a single placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub nn_cv: f64,
    pub next_nn_cv: f64,
    pub density_mean: f64,
    pub density_variance: f64,
    pub scree: Vec<f64>,
    /// Empty for non-planar point sets.
    pub dual_degree_hist: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalOptions {
    pub windows: usize,
    /// `None` uses one agent's share of the feasible volume.
    pub window_area: Option<f64>,
    pub window_shape: WindowShape,
    pub grid_resolution: usize,
    pub seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            windows: 10_000,
            window_area: None,
            window_shape: WindowShape::Square,
            grid_resolution: 1000,
            seed: 0,
        }
    }
}

pub fn evaluate(points: &PointSet, env: &Environment, opts: &EvalOptions) -> Result<EvalReport> {
    let (nn_cv, next_nn_cv) = nn_cv(points)?;
    let area = opts
        .window_area
        .unwrap_or_else(|| default_window_area(env, points.len()));
    let mut rng = seeded(opts.seed);
    let density = window_density_test(points, env, opts.windows, area, opts.window_shape, &mut rng)?;
    let scree = pca_scree(points)?;
    let dual_degree_hist = if env.dims() == 2 {
        dual_degree_histogram(points, env, opts.grid_resolution)?
    } else {
        BTreeMap::new()
    };
    Ok(EvalReport {
        nn_cv,
        next_nn_cv,
        density_mean: density.mean,
        density_variance: density.variance,
        scree,
        dual_degree_hist,
    })
}
