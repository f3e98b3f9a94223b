//! Repulsive-agent partitioning (RAO) and its orthogonal variant (ONNRAO).
//!
//! A run normalizes random agents toward their mean nearest-neighbor spacing,
//! then alternates expansion sweeps while a global spacing multiplier
//! (`mean_expand`) grows. RAO pushes apart every pair that is closer than the
//! ideal spacing in all dimensions. ONNRAO first pushes each agent away from
//! the segment joining its two nearest neighbors when it sits closer to that
//! segment than the swarm average, which breaks up collinear stacks.
//!
//! Sweeps update agents in place (Gauss-Seidel order).

use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::geometry::{
    distance, mean_abs_offsets, nearest_neighbors, nearest_point_on_segment_into,
    two_nearest_neighbors, unit_vector_into, PointSet,
};
use crate::rng::{seeded, SwarmRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rao,
    Onnrao,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rao => "rao",
            Algorithm::Onnrao => "onnrao",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rao" => Ok(Algorithm::Rao),
            "onnrao" => Ok(Algorithm::Onnrao),
            other => Err(Error::InvalidConfig(format!("unknown algorithm `{other}`"))),
        }
    }
}

pub const DEFAULT_TOLERANCE_CONVERGE: f64 = 1.5e-3;
pub const DEFAULT_TOLERANCE_NORMALIZATION: f64 = 1e-3;
pub const DEFAULT_MAX_ITERS: usize = 20_000;
pub const DEFAULT_EXPAND_BY: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartitionConfig {
    pub algorithm: Algorithm,
    pub agents: usize,
    pub tolerance_converge: f64,
    pub tolerance_normalization: f64,
    pub max_iters: usize,
    pub expand_by: f64,
    pub seed: u64,
    /// Keep sweeping until `max_iters` even after convergence (benchmarks).
    pub disable_convergence: bool,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Onnrao,
            agents: 25,
            tolerance_converge: DEFAULT_TOLERANCE_CONVERGE,
            tolerance_normalization: DEFAULT_TOLERANCE_NORMALIZATION,
            max_iters: DEFAULT_MAX_ITERS,
            expand_by: DEFAULT_EXPAND_BY,
            seed: 0,
            disable_convergence: false,
        }
    }
}

impl PartitionConfig {
    pub fn new(algorithm: Algorithm, agents: usize, seed: u64) -> Self {
        Self {
            algorithm,
            agents,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance_converge > 0.0 && self.tolerance_converge.is_finite()) {
            return Err(Error::InvalidConfig("tolerance_converge must be > 0".into()));
        }
        if !(self.tolerance_normalization > 0.0 && self.tolerance_normalization.is_finite()) {
            return Err(Error::InvalidConfig("tolerance_normalization must be > 0".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be >= 1".into()));
        }
        if !(self.expand_by > 0.0 && self.expand_by.is_finite()) {
            return Err(Error::InvalidConfig("expand_by must be > 0".into()));
        }
        Ok(())
    }

    fn min_agents(&self) -> usize {
        match self.algorithm {
            Algorithm::Rao => 2,
            Algorithm::Onnrao => 3,
        }
    }
}

/// Per-sweep movement measures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepDiff {
    /// `(1/D) Σ_d |Σ_p (new - old)|`, the convergence test quantity.
    pub net: f64,
    /// `Σ_p Σ_d (new - old)²`.
    pub sum_sq: f64,
}

impl SweepDiff {
    pub fn between(old: &PointSet, new: &PointSet) -> Self {
        let dims = old.dims();
        let mut per_dim = vec![0.0; dims];
        let mut sum_sq = 0.0;
        for (a, b) in old.iter().zip(new.iter()) {
            for d in 0..dims {
                let delta = b[d] - a[d];
                per_dim[d] += delta;
                sum_sq += delta * delta;
            }
        }
        let net = per_dim.iter().map(|x| x.abs()).sum::<f64>() / dims as f64;
        Self { net, sum_sq }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionResult {
    pub points: PointSet,
    pub iterations_used: usize,
    pub converged: bool,
    /// Net displacement per sweep (the convergence quantity).
    pub diff_trace: Vec<f64>,
    /// Sum of squared displacements per sweep.
    pub sum_sq_trace: Vec<f64>,
    pub mean_expand_final: f64,
    pub normalization_sweeps: usize,
}

/// Scratch buffers for image repulsion.
struct ImageScratch {
    image: Vec<f64>,
    push: Vec<f64>,
    u: Vec<f64>,
}

impl ImageScratch {
    fn new(dims: usize) -> Self {
        Self {
            image: vec![0.0; dims],
            push: vec![0.0; dims],
            u: vec![0.0; dims],
        }
    }
}

/// Image-charge repulsion followed by clamping/projection into the feasible set.
///
/// Each mirror image `q` of `p` that lies within `ideal` in every dimension
/// contributes `w * (ideal - |p - q|) ∘ n / 2`, with `n` the surface normal
/// toward `p` (the direction from `q` to `p`, also defined when `p` lies on the
/// surface). Contributions are summed from the same snapshot of `p`.
fn enforce_with_images(
    env: &Environment,
    p: &mut [f64],
    ideal: &[f64],
    rng: &mut SwarmRng,
    ws: &mut ImageScratch,
) {
    let dims = p.len();
    ws.push.iter_mut().for_each(|x| *x = 0.0);
    let mut any = false;
    {
        let ImageScratch { image, push, u } = ws;
        env.for_each_image(p, ideal, image, u, |q, u| {
            if (0..dims).all(|d| (p[d] - q[d]).abs() < ideal[d]) {
                let w = env.pair_weight(p, q);
                for d in 0..dims {
                    push[d] += w * (ideal[d] - (p[d] - q[d]).abs()) * u[d] / 2.0;
                }
                any = true;
            }
        });
    }
    if any {
        for d in 0..dims {
            p[d] += ws.push[d];
        }
    }
    env.enforce_in_place(p, rng);
}

fn check_finite(points: &PointSet) -> Result<()> {
    if points.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite("agent coordinates diverged".into()))
    }
}

/// One pass of nearest-neighbor normalization: every agent moves half-way
/// toward (or away from) its nearest neighbor by the per-dimension gap to
/// the swarm's mean spacing.
pub fn normalization_sweep(points: &mut PointSet, env: &Environment, rng: &mut SwarmRng) -> Result<()> {
    points.require(2)?;
    let nn = nearest_neighbors(points)?;
    let mean = mean_abs_offsets(points, &nn);
    let dims = points.dims();
    let mut other = vec![0.0; dims];
    let mut u = vec![0.0; dims];
    for (p, &j) in nn.iter().enumerate() {
        other.copy_from_slice(points.point(j));
        let here = points.point_mut(p);
        unit_vector_into(&other, here, rng, &mut u);
        for d in 0..dims {
            here[d] += (mean[d] - (here[d] - other[d]).abs()) * u[d] / 2.0;
        }
        env.enforce_in_place(here, rng);
    }
    check_finite(points)
}

/// Normalize randomly placed agents until the net per-sweep movement drops
/// below `threshold` (or `max_sweeps` passes). Returns the sweep count.
pub fn initialize(
    points: &mut PointSet,
    env: &Environment,
    threshold: f64,
    max_sweeps: usize,
    rng: &mut SwarmRng,
) -> Result<usize> {
    if threshold <= 0.0 {
        return Err(Error::InvalidConfig("normalization threshold must be > 0".into()));
    }
    check_finite(points)?;
    let mut sweeps = 0;
    while sweeps < max_sweeps {
        let old = points.clone();
        normalization_sweep(points, env, rng)?;
        sweeps += 1;
        if SweepDiff::between(&old, points).net < threshold {
            break;
        }
    }
    Ok(sweeps)
}

/// Displacement applied to `a` (and subtracted from `b`) when the pair is
/// closer than `ideal` in every dimension:
/// `w(a, b) * (ideal - |a - b|) ∘ u(b→a) / 2`. `None` when the pair does not trigger.
pub fn pair_displacement(
    env: &Environment,
    a: &[f64],
    b: &[f64],
    ideal: &[f64],
    rng: &mut SwarmRng,
) -> Option<Vec<f64>> {
    let mut u = vec![0.0; a.len()];
    let mut disp = vec![0.0; a.len()];
    pair_displacement_into(env, a, b, ideal, rng, &mut u, &mut disp).then_some(disp)
}

fn pair_displacement_into(
    env: &Environment,
    a: &[f64],
    b: &[f64],
    ideal: &[f64],
    rng: &mut SwarmRng,
    u: &mut [f64],
    disp: &mut [f64],
) -> bool {
    if !(0..a.len()).all(|d| (a[d] - b[d]).abs() < ideal[d]) {
        return false;
    }
    let w = env.pair_weight(a, b);
    unit_vector_into(b, a, rng, u);
    for d in 0..a.len() {
        disp[d] = w * (ideal[d] - (a[d] - b[d]).abs()) * u[d] / 2.0;
    }
    true
}

/// Nearest-neighbor repulsion sweep. Returns the number of pairs that repelled.
pub fn expand_nn(points: &mut PointSet, env: &Environment, mean_expand: f64, rng: &mut SwarmRng) -> Result<usize> {
    points.require(2)?;
    let dims = points.dims();
    let count = points.len();
    let mut ideal = mean_abs_offsets(points, &nearest_neighbors(points)?);
    ideal.iter_mut().for_each(|x| *x *= mean_expand);
    let mut ws = ImageScratch::new(dims);
    let (mut a, mut b) = (vec![0.0; dims], vec![0.0; dims]);
    let (mut u, mut disp) = (vec![0.0; dims], vec![0.0; dims]);
    let mut triggered = 0;

    for p in 0..count {
        for j in 0..count {
            if j == p {
                continue;
            }
            a.copy_from_slice(points.point(p));
            b.copy_from_slice(points.point(j));
            if pair_displacement_into(env, &a, &b, &ideal, rng, &mut u, &mut disp) {
                triggered += 1;
                for d in 0..dims {
                    a[d] += disp[d];
                    b[d] -= disp[d];
                }
                enforce_with_images(env, &mut a, &ideal, rng, &mut ws);
                enforce_with_images(env, &mut b, &ideal, rng, &mut ws);
                points.set_point(j, &b);
            }
            enforce_with_images(env, &mut a, &ideal, rng, &mut ws);
            points.set_point(p, &a);
        }
    }
    check_finite(points)?;
    Ok(triggered)
}

/// Orthogonal repulsion sweep: agents closer than average to the segment
/// between their two nearest neighbors are pushed off it.
pub fn expand_onn(points: &mut PointSet, env: &Environment, rng: &mut SwarmRng) -> Result<()> {
    points.require(3)?;
    let dims = points.dims();
    let count = points.len();
    let mut on_line = PointSet::new(dims, vec![0.0; dims * count])?;
    let mut dists = Vec::with_capacity(count);
    for p in 0..count {
        let (a, b) = two_nearest_neighbors(points, p)?;
        nearest_point_on_segment_into(points.point(a), points.point(b), points.point(p), on_line.point_mut(p));
        dists.push(distance(on_line.point(p), points.point(p)));
    }
    let mean_dist = dists.iter().sum::<f64>() / count as f64;
    let mut ideal = vec![0.0; dims];
    for (p, s) in on_line.iter().enumerate() {
        let here = points.point(p);
        for d in 0..dims {
            ideal[d] += (s[d] - here[d]).abs();
        }
    }
    ideal.iter_mut().for_each(|x| *x /= count as f64);

    let mut ws = ImageScratch::new(dims);
    let (mut a, mut u) = (vec![0.0; dims], vec![0.0; dims]);
    for p in 0..count {
        a.copy_from_slice(points.point(p));
        if dists[p] < mean_dist {
            let s = on_line.point(p);
            let w = env.pair_weight(&a, s);
            unit_vector_into(s, &a, rng, &mut u);
            for d in 0..dims {
                a[d] += w * (ideal[d] - (a[d] - s[d]).abs()) * u[d] / 2.0;
            }
        }
        enforce_with_images(env, &mut a, &ideal, rng, &mut ws);
        points.set_point(p, &a);
    }
    check_finite(points)
}

/// One full iteration of the chosen algorithm. Returns the number of
/// nearest-neighbor pairs that repelled.
pub fn sweep(
    algorithm: Algorithm,
    points: &mut PointSet,
    env: &Environment,
    mean_expand: f64,
    rng: &mut SwarmRng,
) -> Result<usize> {
    if algorithm == Algorithm::Onnrao {
        expand_onn(points, env, rng)?;
    }
    expand_nn(points, env, mean_expand, rng)
}

/// Run a full partitioning from `initial` (or seeded uniform random points).
///
/// After normalization, each outer cycle raises `mean_expand` by
/// `tolerance_converge * expand_by` and sweeps until the net displacement of a
/// sweep is at most `tolerance_converge`. The run has converged when a cycle
/// settles on its first sweep, i.e. the extra expansion no longer moves the
/// swarm; otherwise it stops after `max_iters` sweeps.
pub fn run(config: &PartitionConfig, env: &Environment, initial: Option<PointSet>) -> Result<PartitionResult> {
    run_observed(config, env, initial, |_, _| {})
}

/// [`run`] that calls `observe(sweep, points)` after normalization (sweep 0)
/// and after every expansion sweep.
pub fn run_observed(
    config: &PartitionConfig,
    env: &Environment,
    initial: Option<PointSet>,
    mut observe: impl FnMut(usize, &PointSet),
) -> Result<PartitionResult> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let mut points = match initial {
        Some(points) => {
            if points.dims() != env.dims() {
                return Err(Error::DimensionMismatch {
                    expected: env.dims(),
                    actual: points.dims(),
                });
            }
            if let Some(index) = env.first_infeasible(&points) {
                return Err(Error::Infeasible { index });
            }
            points
        }
        None => {
            if config.agents < config.min_agents() {
                return Err(Error::InsufficientAgents {
                    required: config.min_agents(),
                    actual: config.agents,
                });
            }
            env.sample_points(config.agents, &mut rng)?
        }
    };
    points.require(config.min_agents())?;

    let normalization_sweeps = initialize(
        &mut points,
        env,
        config.tolerance_normalization,
        config.max_iters,
        &mut rng,
    )?;
    observe(0, &points);

    let tol = config.tolerance_converge;
    let mut mean_expand = 1.0;
    let mut iters = 0;
    let mut converged = false;
    let mut diff_trace = Vec::new();
    let mut sum_sq_trace = Vec::new();

    while iters < config.max_iters {
        mean_expand += tol * config.expand_by;
        let mut diff = f64::INFINITY;
        let mut cycle_sweeps = 0;
        while iters < config.max_iters && diff > tol {
            iters += 1;
            cycle_sweeps += 1;
            let old = points.clone();
            sweep(config.algorithm, &mut points, env, mean_expand, &mut rng)?;
            let d = SweepDiff::between(&old, &points);
            diff = d.net;
            diff_trace.push(d.net);
            sum_sq_trace.push(d.sum_sq);
            observe(iters, &points);
        }
        if diff <= tol && cycle_sweeps == 1 && !config.disable_convergence {
            converged = true;
            break;
        }
    }

    Ok(PartitionResult {
        points,
        iterations_used: iters,
        converged,
        diff_trace,
        sum_sq_trace,
        mean_expand_final: mean_expand,
        normalization_sweeps,
    })
}
