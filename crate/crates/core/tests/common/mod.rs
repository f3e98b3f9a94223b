//! Helpers shared by the acceptance suite, including a straight-line
//! reimplementation of one RAO / ONNRAO sweep in the plane that does not use
//! any library internals.

#![allow(dead_code)]

pub type P2 = [f64; 2];

/// Circular region with a displacement multiplier.
#[derive(Clone, Copy, Debug)]
pub struct Disk {
    pub center: P2,
    pub radius: f64,
    pub weight: f64,
}

/// Unit square with optional weighted disks; no obstacles.
pub struct Plane {
    pub disks: Vec<Disk>,
}

fn dist(a: P2, b: P2) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

impl Plane {
    fn inside(&self, k: usize, x: P2) -> bool {
        let c = self.disks[k].center;
        let r = self.disks[k].radius;
        (x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2) <= r * r
    }

    /// Product of weights of every disk containing either point.
    fn weight(&self, a: P2, b: P2) -> f64 {
        let mut w = 1.0;
        for k in 0..self.disks.len() {
            if self.inside(k, a) || self.inside(k, b) {
                w *= self.disks[k].weight;
            }
        }
        w
    }

    /// Wall repulsion by mirror images, then clamping into [0, 1]².
    pub fn wall(&self, p: P2, ideal: P2) -> P2 {
        let mut push = [0.0, 0.0];
        for d in 0..2 {
            // lower wall at 0, normal +e_d
            if p[d] < ideal[d] {
                let mut q = p;
                q[d] = -p[d];
                if (p[0] - q[0]).abs() < ideal[0] && (p[1] - q[1]).abs() < ideal[1] {
                    let w = self.weight(p, q);
                    push[d] += w * (ideal[d] - (p[d] - q[d]).abs()) / 2.0;
                }
            }
            // upper wall at 1, normal -e_d
            if 1.0 - p[d] < ideal[d] {
                let mut q = p;
                q[d] = 2.0 - p[d];
                if (p[0] - q[0]).abs() < ideal[0] && (p[1] - q[1]).abs() < ideal[1] {
                    let w = self.weight(p, q);
                    push[d] -= w * (ideal[d] - (p[d] - q[d]).abs()) / 2.0;
                }
            }
        }
        let mut out = [p[0] + push[0], p[1] + push[1]];
        for x in out.iter_mut() {
            *x = x.clamp(0.0, 1.0);
        }
        out
    }

    /// Indices of the agents nearest to `p`, ordered by (distance, index).
    fn ranked(&self, x: &[P2], p: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..x.len()).filter(|&q| q != p).collect();
        idx.sort_by(|&a, &b| {
            dist(x[p], x[a])
                .partial_cmp(&dist(x[p], x[b]))
                .unwrap()
                .then(a.cmp(&b))
        });
        idx
    }

    /// Pairwise nearest-neighbor repulsion.
    pub fn expand_nn(&self, x: &mut [P2], mean_expand: f64) -> usize {
        let n = x.len();
        let mut ideal = [0.0, 0.0];
        for p in 0..n {
            let q = self.ranked(x, p)[0];
            ideal[0] += (x[q][0] - x[p][0]).abs();
            ideal[1] += (x[q][1] - x[p][1]).abs();
        }
        ideal[0] = ideal[0] / n as f64 * mean_expand;
        ideal[1] = ideal[1] / n as f64 * mean_expand;

        let mut hits = 0;
        for p in 0..n {
            for j in 0..n {
                if j == p {
                    continue;
                }
                let mut a = x[p];
                let mut b = x[j];
                let dx = (a[0] - b[0]).abs();
                let dy = (a[1] - b[1]).abs();
                if dx < ideal[0] && dy < ideal[1] {
                    hits += 1;
                    let w = self.weight(a, b);
                    let r = dist(a, b);
                    let u = [(a[0] - b[0]) / r, (a[1] - b[1]) / r];
                    let m = [
                        w * (ideal[0] - dx) * u[0] / 2.0,
                        w * (ideal[1] - dy) * u[1] / 2.0,
                    ];
                    a = [a[0] + m[0], a[1] + m[1]];
                    b = [b[0] - m[0], b[1] - m[1]];
                    a = self.wall(a, ideal);
                    b = self.wall(b, ideal);
                    x[j] = b;
                }
                x[p] = self.wall(a, ideal);
            }
        }
        hits
    }

    /// Orthogonal repulsion from the segment joining the two nearest neighbors.
    /// Returns how many agents were pushed off their segment.
    pub fn expand_onn(&self, x: &mut [P2]) -> usize {
        let n = x.len();
        let mut foot = vec![[0.0, 0.0]; n];
        let mut gap = vec![0.0; n];
        for p in 0..n {
            let r = self.ranked(x, p);
            let (a, b) = (x[r[0]], x[r[1]]);
            let ab = [b[0] - a[0], b[1] - a[1]];
            let len2 = ab[0] * ab[0] + ab[1] * ab[1];
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((x[p][0] - a[0]) * ab[0] + (x[p][1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
            };
            foot[p] = [a[0] + t * ab[0], a[1] + t * ab[1]];
            gap[p] = dist(x[p], foot[p]);
        }
        let mean_gap = gap.iter().sum::<f64>() / n as f64;
        let mut ideal = [0.0, 0.0];
        for p in 0..n {
            ideal[0] += (foot[p][0] - x[p][0]).abs();
            ideal[1] += (foot[p][1] - x[p][1]).abs();
        }
        ideal[0] /= n as f64;
        ideal[1] /= n as f64;

        let mut pushed = 0;
        for p in 0..n {
            let mut a = x[p];
            if gap[p] < mean_gap {
                pushed += 1;
                let s = foot[p];
                let w = self.weight(a, s);
                let r = dist(a, s);
                let u = [(a[0] - s[0]) / r, (a[1] - s[1]) / r];
                a = [
                    a[0] + w * (ideal[0] - (a[0] - s[0]).abs()) * u[0] / 2.0,
                    a[1] + w * (ideal[1] - (a[1] - s[1]).abs()) * u[1] / 2.0,
                ];
            }
            x[p] = self.wall(a, ideal);
        }
        pushed
    }
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Whether 1-D coordinates split into `k` groups of equal size whose
/// separating gaps all exceed `ratio` times the largest within-group spread.
pub fn clusters_into(coords: &[f64], k: usize, ratio: f64) -> bool {
    let n = coords.len();
    if k == 0 || n % k != 0 {
        return false;
    }
    let mut v = coords.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let size = n / k;
    let mut min_gap = f64::INFINITY;
    let mut max_spread: f64 = 0.0;
    for g in 0..k {
        let group = &v[g * size..(g + 1) * size];
        max_spread = max_spread.max(group[size - 1] - group[0]);
        if g + 1 < k {
            min_gap = min_gap.min(v[(g + 1) * size] - group[size - 1]);
        }
    }
    min_gap > ratio * max_spread
}
