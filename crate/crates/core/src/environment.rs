//! Feasible region: an axis-aligned domain box, obstacles carved out of it,
//! and weighted regions that scale the repulsion between agents.
//!
//! Boundaries repel agents through mirror images. An agent close to a wall
//! (or obstacle surface) sees a virtual copy of itself reflected across that
//! surface and is pushed away from it with the same rule used for pairs of
//! real agents.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::rng::seeded;

/// Projection offset used when pushing a point out of an obstacle.
pub const SURFACE_EPS: f64 = 1e-9;

const FEASIBILITY_SAMPLES: usize = 100_000;
const MAX_REJECTION_ATTEMPTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl DomainBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    pub fn unit(dims: usize) -> Self {
        Self {
            lower: vec![0.0; dims],
            upper: vec![1.0; dims],
        }
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn extent(&self, d: usize) -> f64 {
        self.upper[d] - self.lower[d]
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (l, u))| *x >= *l && *x <= *u)
    }

    pub fn clamp(&self, p: &mut [f64]) {
        for (d, x) in p.iter_mut().enumerate() {
            *x = x.clamp(self.lower[d], self.upper[d]);
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        for (d, x) in out.iter_mut().enumerate() {
            *x = self.lower[d] + rng.gen::<f64>() * (self.upper[d] - self.lower[d]);
        }
    }

    fn validate(&self) -> Result<()> {
        if self.lower.is_empty() {
            return Err(Error::InvalidConfig("domain needs at least one dimension".into()));
        }
        if self.lower.len() != self.upper.len() {
            return Err(Error::DimensionMismatch {
                expected: self.lower.len(),
                actual: self.upper.len(),
            });
        }
        for (d, (l, u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidConfig(format!(
                    "domain dimension {d}: lower {l} must be below upper {u}"
                )));
            }
        }
        Ok(())
    }
}

/// Geometry shared by obstacles and weighted regions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "lowercase", deny_unknown_fields)]
pub enum Shape {
    Box { lower: Vec<f64>, upper: Vec<f64> },
    Sphere { center: Vec<f64>, radius: f64 },
}

impl Shape {
    pub fn dims(&self) -> usize {
        match self {
            Shape::Box { lower, .. } => lower.len(),
            Shape::Sphere { center, .. } => center.len(),
        }
    }

    /// Strict interior test.
    pub fn contains_interior(&self, p: &[f64]) -> bool {
        match self {
            Shape::Box { lower, upper } => p
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, u))| *x > *l && *x < *u),
            Shape::Sphere { center, radius } => {
                crate::geometry::distance_sq(p, center) < radius * radius
            }
        }
    }

    /// Closed-set membership (used for weighted regions).
    pub fn contains(&self, p: &[f64]) -> bool {
        match self {
            Shape::Box { lower, upper } => p
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(x, (l, u))| *x >= *l && *x <= *u),
            Shape::Sphere { center, radius } => {
                crate::geometry::distance_sq(p, center) <= radius * radius
            }
        }
    }

    fn validate(&self, dims: usize) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::DimensionMismatch {
                expected: dims,
                actual: self.dims(),
            });
        }
        match self {
            Shape::Box { lower, upper } => {
                if lower.len() != upper.len() {
                    return Err(Error::DimensionMismatch {
                        expected: lower.len(),
                        actual: upper.len(),
                    });
                }
                if lower.iter().zip(upper).any(|(l, u)| !(l.is_finite() && u.is_finite() && l < u)) {
                    return Err(Error::InvalidConfig("box shape needs lower < upper in every dimension".into()));
                }
            }
            Shape::Sphere { center, radius } => {
                if !(radius.is_finite() && *radius > 0.0) || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::InvalidConfig("sphere shape needs a finite center and radius > 0".into()));
                }
            }
        }
        Ok(())
    }

    fn intersects(&self, domain: &DomainBox) -> bool {
        match self {
            Shape::Box { lower, upper } => (0..domain.dims())
                .all(|d| lower[d] < domain.upper[d] && upper[d] > domain.lower[d]),
            Shape::Sphere { center, radius } => {
                let mut nearest = center.clone();
                domain.clamp(&mut nearest);
                crate::geometry::distance_sq(&nearest, center) < radius * radius
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedRegion {
    pub region: Shape,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    pub domain: DomainBox,
    #[serde(default)]
    pub obstacles: Vec<Shape>,
    #[serde(default)]
    pub regions: Vec<WeightedRegion>,
}

impl Environment {
    pub fn new(domain: DomainBox, obstacles: Vec<Shape>, regions: Vec<WeightedRegion>) -> Result<Self> {
        let env = Self {
            domain,
            obstacles,
            regions,
        };
        env.validate()?;
        Ok(env)
    }

    /// Unit hypercube with no obstacles or regions.
    pub fn unit(dims: usize) -> Self {
        Self {
            domain: DomainBox::unit(dims),
            obstacles: Vec::new(),
            regions: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        let dims = self.dims();
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate(dims)?;
            if !o.intersects(&self.domain) {
                return Err(Error::InvalidConfig(format!("obstacle {i} does not intersect the domain")));
            }
        }
        for r in &self.regions {
            r.region.validate(dims)?;
            if !(r.weight.is_finite() && r.weight > 0.0) {
                return Err(Error::InvalidConfig(format!("region weight {} must be positive", r.weight)));
            }
        }
        if !self.obstacles.is_empty() {
            let mut rng = seeded(0);
            let mut p = vec![0.0; dims];
            let any = (0..FEASIBILITY_SAMPLES).any(|_| {
                self.domain.sample(&mut rng, &mut p);
                self.is_feasible_unchecked(&p)
            });
            if !any {
                return Err(Error::InvalidConfig("obstacles cover the whole domain".into()));
            }
        }
        Ok(())
    }

    pub fn dims(&self) -> usize {
        self.domain.dims()
    }

    fn check_dims(&self, p: &[f64]) -> Result<()> {
        if p.len() != self.dims() {
            Err(Error::DimensionMismatch {
                expected: self.dims(),
                actual: p.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Inside the domain box (inclusive) and outside every obstacle interior.
    pub fn is_feasible(&self, p: &[f64]) -> Result<bool> {
        self.check_dims(p)?;
        Ok(self.is_feasible_unchecked(p))
    }

    pub(crate) fn is_feasible_unchecked(&self, p: &[f64]) -> bool {
        self.domain.contains(p) && !self.obstacles.iter().any(|o| o.contains_interior(p))
    }

    /// Index of the first infeasible agent, if any.
    pub fn first_infeasible(&self, points: &PointSet) -> Option<usize> {
        points.iter().position(|p| !self.is_feasible_unchecked(p))
    }

    /// Volume of the feasible set. Exact without obstacles, otherwise a
    /// fixed-seed Monte Carlo estimate.
    pub fn feasible_volume(&self) -> f64 {
        let total = self.domain.volume();
        if self.obstacles.is_empty() {
            return total;
        }
        let n = 200_000;
        let mut rng = seeded(0x5eed);
        let mut p = vec![0.0; self.dims()];
        let hits = (0..n)
            .filter(|_| {
                self.domain.sample(&mut rng, &mut p);
                self.is_feasible_unchecked(&p)
            })
            .count();
        total * hits as f64 / n as f64
    }

    /// Uniform feasible point by rejection sampling.
    pub fn sample_feasible<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        let mut p = vec![0.0; self.dims()];
        self.sample_feasible_into(rng, &mut p)?;
        Ok(p)
    }

    pub(crate) fn sample_feasible_into<R: Rng + ?Sized>(&self, rng: &mut R, p: &mut [f64]) -> Result<()> {
        for _ in 0..MAX_REJECTION_ATTEMPTS {
            self.domain.sample(rng, p);
            if self.is_feasible_unchecked(p) {
                return Ok(());
            }
        }
        Err(Error::Degenerate("rejection sampling found no feasible point".into()))
    }

    pub fn sample_points<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Result<PointSet> {
        let mut set = PointSet::empty(self.dims());
        for _ in 0..count {
            set.push(&self.sample_feasible(rng)?)?;
        }
        Ok(set)
    }

    /// Mirror images of `p` across every nearby surface.
    ///
    /// A surface is near when the per-dimension offset from `p` to it is below
    /// `threshold` in every dimension. Box faces (domain or obstacle) reflect
    /// one coordinate; obstacle box faces only count when `p` projects onto
    /// the face. Spheres reflect radially to distance `2r - |p - c|` from the
    /// center.
    pub fn image_points(&self, p: &[f64], threshold: &[f64]) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut scratch = vec![0.0; p.len()];
        let mut normal = vec![0.0; p.len()];
        self.for_each_image(p, threshold, &mut scratch, &mut normal, |q, _| out.push(q.to_vec()));
        out
    }

    /// Calls `f(image, normal)` for each image, where `normal` is the unit
    /// surface normal pointing from the reflecting surface toward `p` (equal to
    /// the image-to-`p` direction whenever the two differ).
    pub(crate) fn for_each_image(
        &self,
        p: &[f64],
        threshold: &[f64],
        scratch: &mut [f64],
        normal: &mut [f64],
        mut f: impl FnMut(&[f64], &[f64]),
    ) {
        let dims = p.len();
        let axis = |normal: &mut [f64], d: usize, sign: f64| {
            normal.iter_mut().for_each(|x| *x = 0.0);
            normal[d] = sign;
        };
        for d in 0..dims {
            let lo = self.domain.lower[d];
            let hi = self.domain.upper[d];
            if p[d] - lo < threshold[d] {
                scratch.copy_from_slice(p);
                scratch[d] = 2.0 * lo - p[d];
                axis(normal, d, 1.0);
                f(scratch, normal);
            }
            if hi - p[d] < threshold[d] {
                scratch.copy_from_slice(p);
                scratch[d] = 2.0 * hi - p[d];
                axis(normal, d, -1.0);
                f(scratch, normal);
            }
        }
        for obstacle in &self.obstacles {
            match obstacle {
                Shape::Box { lower, upper } => {
                    for d in 0..dims {
                        let on_face = (0..dims)
                            .filter(|&e| e != d)
                            .all(|e| p[e] >= lower[e] && p[e] <= upper[e]);
                        if !on_face {
                            continue;
                        }
                        if p[d] <= lower[d] && lower[d] - p[d] < threshold[d] {
                            scratch.copy_from_slice(p);
                            scratch[d] = 2.0 * lower[d] - p[d];
                            axis(normal, d, -1.0);
                            f(scratch, normal);
                        }
                        if p[d] >= upper[d] && p[d] - upper[d] < threshold[d] {
                            scratch.copy_from_slice(p);
                            scratch[d] = 2.0 * upper[d] - p[d];
                            axis(normal, d, 1.0);
                            f(scratch, normal);
                        }
                    }
                }
                Shape::Sphere { center, radius } => {
                    let rho = crate::geometry::distance(p, center);
                    if rho < *radius || rho >= 2.0 * radius || rho == 0.0 {
                        continue;
                    }
                    // offset to the nearest surface point is (rho - r) * u
                    let gap = (rho - radius) / rho;
                    let near = (0..dims).all(|e| ((p[e] - center[e]) * gap).abs() < threshold[e]);
                    if near {
                        let scale = (2.0 * radius - rho) / rho;
                        for e in 0..dims {
                            scratch[e] = center[e] + (p[e] - center[e]) * scale;
                            normal[e] = (p[e] - center[e]) / rho;
                        }
                        f(scratch, normal);
                    }
                }
            }
        }
    }

    /// Clamp into the domain, then push out of any obstacle onto its nearest
    /// surface (offset by [`SURFACE_EPS`]).
    pub fn enforce_boundaries<R: Rng + ?Sized>(&self, p: &[f64], rng: &mut R) -> Vec<f64> {
        let mut out = p.to_vec();
        self.enforce_in_place(&mut out, rng);
        out
    }

    pub(crate) fn enforce_in_place<R: Rng + ?Sized>(&self, p: &mut [f64], rng: &mut R) {
        self.domain.clamp(p);
        if self.obstacles.is_empty() {
            return;
        }
        for _ in 0..8 {
            let Some(obstacle) = self.obstacles.iter().find(|o| o.contains_interior(p)) else {
                return;
            };
            self.push_out(obstacle, p, rng);
            self.domain.clamp(p);
        }
    }

    fn push_out<R: Rng + ?Sized>(&self, obstacle: &Shape, p: &mut [f64], rng: &mut R) {
        let dims = p.len();
        let mut candidates: Vec<(f64, Vec<f64>)> = Vec::with_capacity(2 * dims);
        match obstacle {
            Shape::Box { lower, upper } => {
                for d in 0..dims {
                    let mut q = p.to_vec();
                    q[d] = lower[d] - SURFACE_EPS;
                    candidates.push((p[d] - lower[d], q));
                    let mut q = p.to_vec();
                    q[d] = upper[d] + SURFACE_EPS;
                    candidates.push((upper[d] - p[d], q));
                }
            }
            Shape::Sphere { center, radius } => {
                let mut u = vec![0.0; dims];
                crate::geometry::unit_vector_into(center, p, rng, &mut u);
                let rho = crate::geometry::distance(p, center);
                let q: Vec<f64> = (0..dims).map(|e| center[e] + (radius + SURFACE_EPS) * u[e]).collect();
                candidates.push((radius - rho, q));
                // fallback exits when the radial one leaves the domain
                for d in 0..dims {
                    for sign in [-1.0, 1.0] {
                        let mut q = p.to_vec();
                        let off = p[d] - center[d];
                        let rest = radius * radius - (crate::geometry::distance_sq(p, center) - off * off);
                        q[d] = center[d] + sign * (rest.max(0.0).sqrt() + SURFACE_EPS);
                        candidates.push(((q[d] - p[d]).abs(), q));
                    }
                }
            }
        }
        candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
        let pick = candidates
            .iter()
            .find(|(_, q)| self.is_feasible_unchecked(q))
            .or_else(|| candidates.iter().find(|(_, q)| self.domain.contains(q)))
            .unwrap_or(&candidates[0]);
        p.copy_from_slice(&pick.1);
    }

    /// Product of the weights of every region containing `p` or `q`.
    pub fn pair_weight(&self, p: &[f64], q: &[f64]) -> f64 {
        self.regions
            .iter()
            .filter(|r| r.region.contains(p) || r.region.contains(q))
            .map(|r| r.weight)
            .product()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::distance;
    use proptest::prelude::*;

    fn square_with(obstacles: Vec<Shape>, regions: Vec<WeightedRegion>) -> Environment {
        Environment::new(DomainBox::unit(2), obstacles, regions).unwrap()
    }

    fn sphere(c: [f64; 2], r: f64) -> Shape {
        Shape::Sphere {
            center: c.to_vec(),
            radius: r,
        }
    }

    fn square_obstacle(lo: f64, hi: f64) -> Shape {
        Shape::Box {
            lower: vec![lo; 2],
            upper: vec![hi; 2],
        }
    }

    #[test]
    fn feasibility_examples() {
        let env = Environment::unit(2);
        assert!(env.is_feasible(&[0.5, 0.5]).unwrap());
        assert!(!env.is_feasible(&[1.1, 0.5]).unwrap());
        let env = square_with(vec![square_obstacle(0.4, 0.6)], vec![]);
        assert!(!env.is_feasible(&[0.5, 0.5]).unwrap());
        assert!(env.is_feasible(&[0.4, 0.5]).unwrap());
        assert!(matches!(
            env.is_feasible(&[0.5]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(DomainBox::new(vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(Environment::new(DomainBox::unit(2), vec![square_obstacle(-1.0, 2.0)], vec![]).is_err());
        assert!(Environment::new(DomainBox::unit(2), vec![square_obstacle(2.0, 3.0)], vec![]).is_err());
        assert!(Environment::new(
            DomainBox::unit(2),
            vec![],
            vec![WeightedRegion { region: sphere([0.5, 0.5], 0.1), weight: 0.0 }]
        )
        .is_err());
    }

    #[test]
    fn image_points_examples() {
        let env = Environment::unit(2);
        let imgs = env.image_points(&[0.05, 0.5], &[0.2, 0.2]);
        assert_eq!(imgs.len(), 1);
        assert!((imgs[0][0] + 0.05).abs() < 1e-15 && imgs[0][1] == 0.5);

        let imgs = env.image_points(&[0.05, 0.05], &[0.2, 0.2]);
        assert_eq!(imgs.len(), 2);
        assert!((imgs[0][0] + 0.05).abs() < 1e-15 && imgs[0][1] == 0.05);
        assert!(imgs[1][0] == 0.05 && (imgs[1][1] + 0.05).abs() < 1e-15);

        assert!(env.image_points(&[0.5, 0.5], &[0.1, 0.1]).is_empty());
    }

    #[test]
    fn obstacle_images() {
        let env = square_with(vec![square_obstacle(0.4, 0.6), sphere([0.2, 0.8], 0.1)], vec![]);
        let imgs = env.image_points(&[0.35, 0.5], &[0.1, 0.1]);
        assert_eq!(imgs.len(), 1);
        assert!((imgs[0][0] - 0.45).abs() < 1e-12);
        // beside the box but not projecting onto the x-face
        assert!(env.image_points(&[0.35, 0.65], &[0.1, 0.1]).is_empty());
        let imgs = env.image_points(&[0.2, 0.65], &[0.1, 0.1]);
        assert_eq!(imgs.len(), 1);
        assert!((distance(&imgs[0], &[0.2, 0.8]) - 0.05).abs() < 1e-12);
    }

    #[test]
    fn enforce_examples() {
        let env = Environment::unit(2);
        let mut rng = seeded(0);
        assert_eq!(env.enforce_boundaries(&[1.2, 0.5], &mut rng), vec![1.0, 0.5]);
        assert_eq!(env.enforce_boundaries(&[0.3, 0.7], &mut rng), vec![0.3, 0.7]);

        let env = square_with(vec![sphere([0.5, 0.5], 0.1)], vec![]);
        let q = env.enforce_boundaries(&[0.5, 0.5], &mut rng);
        assert!((distance(&q, &[0.5, 0.5]) - (0.1 + SURFACE_EPS)).abs() < 1e-12);
        assert!(env.is_feasible(&q).unwrap());

        let env = square_with(vec![square_obstacle(0.4, 0.6)], vec![]);
        let q = env.enforce_boundaries(&[0.42, 0.5], &mut rng);
        assert_eq!(q, vec![0.4 - SURFACE_EPS, 0.5]);
    }

    #[test]
    fn enforce_handles_obstacle_against_wall() {
        // obstacle touching the right wall: pushing right would leave the domain
        let env = square_with(
            vec![Shape::Box {
                lower: vec![0.7, 0.0],
                upper: vec![1.0, 1.0],
            }],
            vec![],
        );
        let q = env.enforce_boundaries(&[0.99, 0.5], &mut seeded(1));
        assert!(env.is_feasible(&q).unwrap());
    }

    #[test]
    fn pair_weight_examples() {
        assert_eq!(Environment::unit(2).pair_weight(&[0.5, 0.5], &[0.1, 0.1]), 1.0);
        let env = square_with(
            vec![],
            vec![WeightedRegion { region: sphere([0.5, 0.5], 0.2), weight: 100.0 }],
        );
        assert_eq!(env.pair_weight(&[0.5, 0.5], &[0.05, 0.05]), 100.0);
        assert_eq!(env.pair_weight(&[0.5, 0.5], &[0.55, 0.5]), 100.0);
        let env = square_with(
            vec![],
            vec![
                WeightedRegion { region: sphere([0.25, 0.5], 0.2), weight: 200.0 },
                WeightedRegion { region: sphere([0.75, 0.5], 0.2), weight: 1.0 / 200.0 },
            ],
        );
        assert!((env.pair_weight(&[0.25, 0.5], &[0.75, 0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn feasible_volume_estimates() {
        assert_eq!(Environment::unit(2).feasible_volume(), 1.0);
        let env = square_with(vec![square_obstacle(0.25, 0.75)], vec![]);
        assert!((env.feasible_volume() - 0.75).abs() < 0.01);
    }

    fn env_strategy() -> impl Strategy<Value = Environment> {
        (0.3..0.45f64, 0.55..0.7f64, prop::bool::ANY).prop_map(|(lo, hi, round)| {
            let o = if round {
                sphere([0.5, 0.5], (hi - lo) / 2.0)
            } else {
                square_obstacle(lo, hi)
            };
            square_with(vec![o], vec![])
        })
    }

    proptest! {
        #[test]
        fn enforce_is_idempotent_and_feasible(
            env in env_strategy(),
            x in -0.5..1.5f64,
            y in -0.5..1.5f64,
            seed in any::<u64>(),
        ) {
            let mut rng = seeded(seed);
            let once = env.enforce_boundaries(&[x, y], &mut rng);
            prop_assert!(env.is_feasible(&once).unwrap());
            let twice = env.enforce_boundaries(&once, &mut rng);
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn images_leave_the_feasible_set(
            env in env_strategy(),
            x in 0.001..0.999f64,
            y in 0.001..0.999f64,
            t in 0.01..0.1f64,
        ) {
            let p = [x, y];
            prop_assume!(env.is_feasible(&p).unwrap());
            let imgs = env.image_points(&p, &[t, t]);
            prop_assert!(imgs.len() <= 4 + 2 * 2);
            for q in imgs {
                prop_assert!(!env.is_feasible(&q).unwrap() || !env.domain.contains(&q));
            }
        }

        #[test]
        fn pair_weight_symmetric(
            a in prop::collection::vec(0.0..1.0f64, 2),
            b in prop::collection::vec(0.0..1.0f64, 2),
            w in 0.01..100.0f64,
        ) {
            let env = square_with(vec![], vec![
                WeightedRegion { region: sphere([0.3, 0.3], 0.25), weight: w },
                WeightedRegion { region: square_obstacle(0.5, 0.9), weight: 3.0 },
            ]);
            prop_assert_eq!(env.pair_weight(&a, &b), env.pair_weight(&b, &a));
        }
    }
}
