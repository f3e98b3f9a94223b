//! Dimension-generic point kernels.
//!
//! Neighbor queries are brute force: each query scans every other agent, so a
//! full sweep over a swarm is O(P²). A spatial index could replace
//! [`nearest_neighbor`] and [`two_nearest_neighbors`] without changing their
//! contracts (ties go to the lowest agent index).

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// D×P agent coordinates, stored agent-major: `coords[p * dims + d]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    dims: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dims: usize, coords: Vec<f64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::InvalidConfig("point set needs at least one dimension".into()));
        }
        if coords.len() % dims != 0 {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: coords.len() % dims,
            });
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(format!(
                "agent {} dimension {}",
                i / dims,
                i % dims
            )));
        }
        Ok(Self { dims, coords })
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dims = points.first().map(|p| p.len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(points.len() * dims);
        for p in points {
            if p.len() != dims {
                return Err(Error::DimensionMismatch {
                    expected: dims,
                    actual: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dims, coords)
    }

    pub fn empty(dims: usize) -> Self {
        Self {
            dims,
            coords: Vec::new(),
        }
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.dims
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dims
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, p: usize) -> &[f64] {
        &self.coords[p * self.dims..(p + 1) * self.dims]
    }

    #[inline]
    pub fn point_mut(&mut self, p: usize) -> &mut [f64] {
        &mut self.coords[p * self.dims..(p + 1) * self.dims]
    }

    pub fn set_point(&mut self, p: usize, value: &[f64]) {
        self.point_mut(p).copy_from_slice(value);
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dims)
    }

    pub fn push(&mut self, point: &[f64]) -> Result<()> {
        if point.len() != self.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dims,
                actual: point.len(),
            });
        }
        self.coords.extend_from_slice(point);
        Ok(())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.len() < required {
            Err(Error::InsufficientAgents {
                required,
                actual: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

#[inline]
pub fn distance_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[inline]
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    distance_sq(a, b).sqrt()
}

/// Index of the agent closest to `p`, lowest index on ties.
pub fn nearest_neighbor(points: &PointSet, p: usize) -> Result<usize> {
    points.require(2)?;
    let here = points.point(p);
    let mut best = usize::MAX;
    let mut best_d = f64::INFINITY;
    for (q, other) in points.iter().enumerate() {
        if q == p {
            continue;
        }
        let d = distance_sq(here, other);
        if d < best_d {
            best_d = d;
            best = q;
        }
    }
    Ok(best)
}

/// Nearest and next-nearest agents to `p`, lowest index on ties.
pub fn two_nearest_neighbors(points: &PointSet, p: usize) -> Result<(usize, usize)> {
    points.require(3)?;
    let here = points.point(p);
    let (mut first, mut second) = (usize::MAX, usize::MAX);
    let (mut d1, mut d2) = (f64::INFINITY, f64::INFINITY);
    for (q, other) in points.iter().enumerate() {
        if q == p {
            continue;
        }
        let d = distance_sq(here, other);
        if d < d1 {
            second = first;
            d2 = d1;
            first = q;
            d1 = d;
        } else if d < d2 {
            second = q;
            d2 = d;
        }
    }
    Ok((first, second))
}

/// Orthogonal projection of `p` onto the segment `[a, b]`, clamped to the endpoints.
pub fn nearest_point_on_segment(a: &[f64], b: &[f64], p: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    nearest_point_on_segment_into(a, b, p, &mut out);
    out
}

pub(crate) fn nearest_point_on_segment_into(a: &[f64], b: &[f64], p: &[f64], out: &mut [f64]) {
    let mut len_sq = 0.0;
    let mut dot = 0.0;
    for d in 0..a.len() {
        let ab = b[d] - a[d];
        len_sq += ab * ab;
        dot += (p[d] - a[d]) * ab;
    }
    if len_sq == 0.0 {
        out.copy_from_slice(a);
        return;
    }
    let t = (dot / len_sq).clamp(0.0, 1.0);
    for d in 0..a.len() {
        out[d] = a[d] + t * (b[d] - a[d]);
    }
}

/// Uniformly distributed direction on the unit sphere.
pub fn random_unit_vector<R: Rng + ?Sized>(dims: usize, rng: &mut R) -> Vec<f64> {
    let mut v = vec![0.0; dims];
    random_unit_vector_into(rng, &mut v);
    v
}

pub(crate) fn random_unit_vector_into<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut norm_sq = 0.0;
        for x in out.iter_mut() {
            *x = StandardNormal.sample(rng);
            norm_sq += *x * *x;
        }
        if norm_sq > 1e-24 {
            let norm = norm_sq.sqrt();
            out.iter_mut().for_each(|x| *x /= norm);
            return;
        }
    }
}

/// Direction from `from` to `to`. Coincident points get a seeded random
/// direction so overlapping agents can separate.
pub fn unit_vector<R: Rng + ?Sized>(from: &[f64], to: &[f64], rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; from.len()];
    unit_vector_into(from, to, rng, &mut out);
    out
}

pub(crate) fn unit_vector_into<R: Rng + ?Sized>(
    from: &[f64],
    to: &[f64],
    rng: &mut R,
    out: &mut [f64],
) {
    let mut norm_sq = 0.0;
    for d in 0..from.len() {
        out[d] = to[d] - from[d];
        norm_sq += out[d] * out[d];
    }
    if norm_sq > 0.0 {
        let norm = norm_sq.sqrt();
        out.iter_mut().for_each(|x| *x /= norm);
    } else {
        random_unit_vector_into(rng, out);
    }
}

/// Nearest neighbor of every agent, computed from one snapshot.
pub fn nearest_neighbors(points: &PointSet) -> Result<Vec<usize>> {
    (0..points.len()).map(|p| nearest_neighbor(points, p)).collect()
}

/// Per-dimension mean of |NN(p)_d - p_d| over all agents.
pub fn mean_nn_l1_per_dimension(points: &PointSet) -> Result<Vec<f64>> {
    let nn = nearest_neighbors(points)?;
    Ok(mean_abs_offsets(points, &nn))
}

pub(crate) fn mean_abs_offsets(points: &PointSet, partner: &[usize]) -> Vec<f64> {
    let dims = points.dims();
    let mut acc = vec![0.0; dims];
    for (p, &q) in partner.iter().enumerate() {
        let a = points.point(p);
        let b = points.point(q);
        for d in 0..dims {
            acc[d] += (b[d] - a[d]).abs();
        }
    }
    let n = partner.len() as f64;
    acc.iter_mut().for_each(|x| *x /= n);
    acc
}
