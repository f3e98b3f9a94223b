//! Centroidal Voronoi tessellation by Monte Carlo Lloyd iteration.
//!
//! Each step draws uniform samples from the feasible set, assigns them to the
//! nearest generator and moves every generator to the mean of its samples.
//! Sample assignment runs in parallel; partial sums are reduced in chunk order
//! so results are identical for any thread count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::geometry::{distance_sq, PointSet};
use crate::rng::{seeded, SwarmRng};

const CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CvtConfig {
    pub generators: usize,
    pub lloyd_iters: usize,
    pub samples_per_iter: usize,
    pub seed: u64,
}

impl Default for CvtConfig {
    fn default() -> Self {
        Self {
            generators: 25,
            lloyd_iters: 100,
            samples_per_iter: 0,
            seed: 0,
        }
    }
}

impl CvtConfig {
    pub fn new(generators: usize, seed: u64) -> Self {
        Self {
            generators,
            seed,
            ..Self::default()
        }
    }

    /// Samples per step; `0` means the floor of 100 per generator.
    pub fn effective_samples(&self) -> usize {
        if self.samples_per_iter == 0 {
            100 * self.generators
        } else {
            self.samples_per_iter
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.generators == 0 {
            return Err(Error::InvalidConfig("generators must be >= 1".into()));
        }
        if self.samples_per_iter != 0 && self.samples_per_iter < 100 * self.generators {
            return Err(Error::InvalidConfig(format!(
                "samples_per_iter must be >= {} (100 per generator)",
                100 * self.generators
            )));
        }
        Ok(())
    }
}

fn nearest_generator(generators: &PointSet, x: &[f64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, g) in generators.iter().enumerate() {
        let d = distance_sq(g, x);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// One Lloyd update using `samples` uniform feasible samples.
pub fn lloyd_step(
    generators: &PointSet,
    env: &Environment,
    samples: usize,
    rng: &mut SwarmRng,
) -> Result<PointSet> {
    let dims = generators.dims();
    if dims != env.dims() {
        return Err(Error::DimensionMismatch {
            expected: env.dims(),
            actual: dims,
        });
    }
    let n = generators.len();
    let mut draws = vec![0.0; samples * dims];
    for x in draws.chunks_exact_mut(dims) {
        env.sample_feasible_into(rng, x)?;
    }

    let partials: Vec<(Vec<f64>, Vec<usize>)> = draws
        .par_chunks(CHUNK * dims)
        .map(|chunk| {
            let mut sums = vec![0.0; n * dims];
            let mut counts = vec![0usize; n];
            for x in chunk.chunks_exact(dims) {
                let g = nearest_generator(generators, x);
                counts[g] += 1;
                for d in 0..dims {
                    sums[g * dims + d] += x[d];
                }
            }
            (sums, counts)
        })
        .collect();

    let mut sums = vec![0.0; n * dims];
    let mut counts = vec![0usize; n];
    for (s, c) in partials {
        for (a, b) in sums.iter_mut().zip(s) {
            *a += b;
        }
        for (a, b) in counts.iter_mut().zip(c) {
            *a += b;
        }
    }

    let mut out = generators.clone();
    for g in 0..n {
        if counts[g] == 0 {
            continue;
        }
        let p = out.point_mut(g);
        for d in 0..dims {
            p[d] = sums[g * dims + d] / counts[g] as f64;
        }
        // The centroid of a cell cut by an obstacle can land inside it.
        env.enforce_in_place(p, rng);
    }
    Ok(out)
}

/// Mean squared distance from `samples` fresh feasible samples to their nearest generator.
pub fn quantization_energy(
    generators: &PointSet,
    env: &Environment,
    samples: usize,
    rng: &mut SwarmRng,
) -> Result<f64> {
    let mut total = 0.0;
    for _ in 0..samples {
        let x = env.sample_feasible(rng)?;
        let g = nearest_generator(generators, &x);
        total += distance_sq(generators.point(g), &x);
    }
    Ok(total / samples as f64)
}

/// Iterate `lloyd_step` from `initial` or from seeded uniform random generators.
pub fn run_cvt(config: &CvtConfig, env: &Environment, initial: Option<PointSet>) -> Result<PointSet> {
    config.validate()?;
    let mut rng = seeded(config.seed);
    let mut generators = match initial {
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
        None => env.sample_points(config.generators, &mut rng)?,
    };
    let samples = config.effective_samples();
    for _ in 0..config.lloyd_iters {
        generators = lloyd_step(&generators, env, samples, &mut rng)?;
    }
    Ok(generators)
}
