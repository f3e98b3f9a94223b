//! C interface to the partitioners, the CVT baseline and the spacing statistics.
//!
//! Objects are opaque heap handles created by `*_new`/producer functions and
//! released with the matching `*_free`. Every fallible call returns a
//! [`SwarmStatus`]; on failure a description is available from
//! [`swarm_last_error_message`] until the next failing call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use swarmpart::cvt::{run_cvt, CvtConfig};
use swarmpart::environment::{DomainBox, Shape, WeightedRegion};
use swarmpart::evaluation::{nn_cv, pca_scree};
use swarmpart::partitioner::{self, Algorithm, PartitionConfig, PartitionResult};
use swarmpart::{Environment, Error, PointSet};

/// Result code of every fallible call. Values 2–8 match the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidConfig = 2,
    InsufficientAgents = 3,
    DimensionMismatch = 4,
    Numeric = 5,
    Infeasible = 6,
    WindowTooLarge = 7,
    Io = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwarmAlgorithm {
    Rao = 0,
    Onnrao = 1,
}

/// Plain-data partition settings; fill with [`swarm_partition_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SwarmPartitionConfig {
    pub algorithm: SwarmAlgorithm,
    pub agents: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub tolerance_converge: f64,
    pub tolerance_normalization: f64,
    pub expand_by: f64,
}

/// Opaque search space.
pub struct SwarmEnvironment(Environment);

/// Opaque agent-major point set.
pub struct SwarmPointSet(PointSet);

/// Opaque partition outcome.
pub struct SwarmPartitionResult(PartitionResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SwarmStatus {
    match e.exit_code() {
        2 => SwarmStatus::InvalidConfig,
        3 => SwarmStatus::InsufficientAgents,
        4 => SwarmStatus::DimensionMismatch,
        5 => SwarmStatus::Numeric,
        6 => SwarmStatus::Infeasible,
        7 => SwarmStatus::WindowTooLarge,
        _ => SwarmStatus::Io,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Run `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SwarmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwarmStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_error(format!("null pointer passed for `{what}`"));
            SwarmStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_error("internal panic".into());
            SwarmStatus::Panic
        }
    }
}

unsafe fn obj<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn obj_mut<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(what))
}

unsafe fn slice<'a>(p: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message describing the most recent failure on this thread, or NULL.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn swarm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Unit hypercube `[0, 1]^dims` without obstacles or regions.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_new_unit(dims: usize, out: *mut *mut SwarmEnvironment) -> SwarmStatus {
    guard(|| {
        if dims == 0 {
            return Err(Error::InvalidConfig("dims must be >= 1".into()).into());
        }
        put(out, SwarmEnvironment(Environment::unit(dims)), "out")
    })
}

/// Box domain with the given corners (`dims` values each).
///
/// # Safety
/// `lower` and `upper` must point to `dims` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_new_box(
    lower: *const f64,
    upper: *const f64,
    dims: usize,
    out: *mut *mut SwarmEnvironment,
) -> SwarmStatus {
    guard(|| {
        let lo = slice(lower, dims, "lower")?.to_vec();
        let hi = slice(upper, dims, "upper")?.to_vec();
        let env = Environment::new(DomainBox::new(lo, hi)?, vec![], vec![])?;
        put(out, SwarmEnvironment(env), "out")
    })
}

/// Parse an environment from TOML (`[domain]`, `[[obstacles]]`, `[[regions]]` tables).
///
/// # Safety
/// `toml` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_from_toml(
    toml: *const c_char,
    out: *mut *mut SwarmEnvironment,
) -> SwarmStatus {
    guard(|| {
        if toml.is_null() {
            return Err(Failure::Null("toml"));
        }
        let text = CStr::from_ptr(toml)
            .to_str()
            .map_err(|_| Error::InvalidConfig("environment text is not UTF-8".into()))?;
        let env: Environment = ::toml::from_str(text).map_err(Error::from)?;
        env.validate()?;
        put(out, SwarmEnvironment(env), "out")
    })
}

/// Add an axis-aligned box obstacle.
///
/// # Safety
/// `env` must be a live handle; `lower`/`upper` must point to `dims` doubles.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_add_box_obstacle(
    env: *mut SwarmEnvironment,
    lower: *const f64,
    upper: *const f64,
    dims: usize,
) -> SwarmStatus {
    guard(|| {
        let env = obj_mut(env, "env")?;
        let shape = Shape::Box {
            lower: slice(lower, dims, "lower")?.to_vec(),
            upper: slice(upper, dims, "upper")?.to_vec(),
        };
        let mut next = env.0.clone();
        next.obstacles.push(shape);
        next.validate()?;
        env.0 = next;
        Ok(())
    })
}

/// Add a spherical region whose pair displacements are scaled by `weight`.
///
/// # Safety
/// `env` must be a live handle; `center` must point to `dims` doubles.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_add_sphere_region(
    env: *mut SwarmEnvironment,
    center: *const f64,
    dims: usize,
    radius: f64,
    weight: f64,
) -> SwarmStatus {
    guard(|| {
        let env = obj_mut(env, "env")?;
        let region = WeightedRegion {
            region: Shape::Sphere {
                center: slice(center, dims, "center")?.to_vec(),
                radius,
            },
            weight,
        };
        let mut next = env.0.clone();
        next.regions.push(region);
        next.validate()?;
        env.0 = next;
        Ok(())
    })
}

/// # Safety
/// `env` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swarm_environment_free(env: *mut SwarmEnvironment) {
    if !env.is_null() {
        drop(Box::from_raw(env));
    }
}

/// Copy `count` agents of `dims` coordinates (agent-major) into a new point set.
///
/// # Safety
/// `coords` must point to `count * dims` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_pointset_new(
    coords: *const f64,
    count: usize,
    dims: usize,
    out: *mut *mut SwarmPointSet,
) -> SwarmStatus {
    guard(|| {
        let n = count
            .checked_mul(dims)
            .ok_or_else(|| Error::InvalidConfig("point set too large".into()))?;
        let set = PointSet::new(dims, slice(coords, n, "coords")?.to_vec())?;
        put(out, SwarmPointSet(set), "out")
    })
}

/// Number of agents; 0 for NULL.
///
/// # Safety
/// `points` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swarm_pointset_len(points: *const SwarmPointSet) -> usize {
    points.as_ref().map_or(0, |p| p.0.len())
}

/// Coordinates per agent; 0 for NULL.
///
/// # Safety
/// `points` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swarm_pointset_dims(points: *const SwarmPointSet) -> usize {
    points.as_ref().map_or(0, |p| p.0.dims())
}

/// Copy all coordinates (agent-major) into `buffer`, which holds `capacity` doubles.
///
/// # Safety
/// `points` must be a live handle; `buffer` must point to `capacity` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn swarm_pointset_copy(
    points: *const SwarmPointSet,
    buffer: *mut f64,
    capacity: usize,
) -> SwarmStatus {
    guard(|| {
        let src = obj(points, "points")?.0.as_slice();
        if capacity < src.len() {
            return Err(Error::InvalidConfig(format!("buffer holds {capacity} values, need {}", src.len())).into());
        }
        if src.is_empty() {
            return Ok(());
        }
        if buffer.is_null() {
            return Err(Failure::Null("buffer"));
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buffer, src.len());
        Ok(())
    })
}

/// # Safety
/// `points` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swarm_pointset_free(points: *mut SwarmPointSet) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// Library defaults for a partition run.
///
/// # Safety
/// `out` must point to writable storage for one config.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition_config_default(out: *mut SwarmPartitionConfig) -> SwarmStatus {
    guard(|| {
        let out = obj_mut(out, "out")?;
        let d = PartitionConfig::default();
        *out = SwarmPartitionConfig {
            algorithm: match d.algorithm {
                Algorithm::Rao => SwarmAlgorithm::Rao,
                Algorithm::Onnrao => SwarmAlgorithm::Onnrao,
            },
            agents: d.agents,
            seed: d.seed,
            max_iters: d.max_iters,
            tolerance_converge: d.tolerance_converge,
            tolerance_normalization: d.tolerance_normalization,
            expand_by: d.expand_by,
        };
        Ok(())
    })
}

/// Run RAO or ONNRAO. `initial` may be NULL for a seeded random start.
///
/// # Safety
/// `config` and `env` must be valid; `initial` NULL or a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition(
    config: *const SwarmPartitionConfig,
    env: *const SwarmEnvironment,
    initial: *const SwarmPointSet,
    out: *mut *mut SwarmPartitionResult,
) -> SwarmStatus {
    guard(|| {
        let c = obj(config, "config")?;
        let env = obj(env, "env")?;
        let cfg = PartitionConfig {
            algorithm: match c.algorithm {
                SwarmAlgorithm::Rao => Algorithm::Rao,
                SwarmAlgorithm::Onnrao => Algorithm::Onnrao,
            },
            agents: c.agents,
            seed: c.seed,
            max_iters: c.max_iters,
            tolerance_converge: c.tolerance_converge,
            tolerance_normalization: c.tolerance_normalization,
            expand_by: c.expand_by,
            disable_convergence: false,
        };
        let start = initial.as_ref().map(|p| p.0.clone());
        let result = partitioner::run(&cfg, &env.0, start)?;
        put(out, SwarmPartitionResult(result), "out")
    })
}

/// Copy of the final agent positions as a new point set.
///
/// # Safety
/// `result` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition_result_points(
    result: *const SwarmPartitionResult,
    out: *mut *mut SwarmPointSet,
) -> SwarmStatus {
    guard(|| {
        let r = obj(result, "result")?;
        put(out, SwarmPointSet(r.0.points.clone()), "out")
    })
}

/// Expansion sweeps performed (excluding normalization); 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition_result_iterations(result: *const SwarmPartitionResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.iterations_used)
}

/// Whether the run stopped by convergence rather than the sweep budget.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition_result_converged(result: *const SwarmPartitionResult) -> bool {
    result.as_ref().is_some_and(|r| r.0.converged)
}

/// # Safety
/// `result` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn swarm_partition_result_free(result: *mut SwarmPartitionResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Monte Carlo Lloyd CVT with `generators` points. `samples_per_iter` 0 uses the default.
///
/// # Safety
/// `env` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_cvt(
    env: *const SwarmEnvironment,
    generators: usize,
    lloyd_iters: usize,
    samples_per_iter: usize,
    seed: u64,
    out: *mut *mut SwarmPointSet,
) -> SwarmStatus {
    guard(|| {
        let env = obj(env, "env")?;
        let cfg = CvtConfig {
            generators,
            lloyd_iters,
            samples_per_iter,
            seed,
        };
        put(out, SwarmPointSet(run_cvt(&cfg, &env.0, None)?), "out")
    })
}

/// Coefficients of variation of nearest and next-nearest neighbor distances.
///
/// # Safety
/// `points` must be a live handle; `nn_out` and `next_out` writable.
#[no_mangle]
pub unsafe extern "C" fn swarm_nn_cv(
    points: *const SwarmPointSet,
    nn_out: *mut f64,
    next_out: *mut f64,
) -> SwarmStatus {
    guard(|| {
        let p = obj(points, "points")?;
        let nn_out = obj_mut(nn_out, "nn_out")?;
        let next_out = obj_mut(next_out, "next_out")?;
        let (a, b) = nn_cv(&p.0)?;
        *nn_out = a;
        *next_out = b;
        Ok(())
    })
}

/// Explained-variance ratios, descending, written to `buffer` (`dims` values).
///
/// # Safety
/// `points` must be a live handle; `buffer` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn swarm_pca_scree(
    points: *const SwarmPointSet,
    buffer: *mut f64,
    capacity: usize,
) -> SwarmStatus {
    guard(|| {
        let p = obj(points, "points")?;
        let ratios = pca_scree(&p.0)?;
        if capacity < ratios.len() {
            return Err(Error::InvalidConfig(format!("buffer holds {capacity} values, need {}", ratios.len())).into());
        }
        if buffer.is_null() {
            return Err(Failure::Null("buffer"));
        }
        ptr::copy_nonoverlapping(ratios.as_ptr(), buffer, ratios.len());
        Ok(())
    })
}
