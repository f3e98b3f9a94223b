//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.
//!
//! `cargo test --release --test acceptance -- 3 12` runs only criteria 3 and 12.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use swarmpart::environment::{DomainBox, Shape, WeightedRegion};
use swarmpart::evaluation::{
    dual_degrees, histogram_mode, nn_cv, pca_scree, pdf_symmetry_score, place, placement_pdf,
    scree_deviation, timing_benchmark, window_density_test, Heatmap, Method, MethodConfigs,
    WindowShape,
};
use swarmpart::geometry::{distance, nearest_neighbors};
use swarmpart::partitioner::{self, expand_nn, expand_onn, run_observed, Algorithm, PartitionConfig};
use swarmpart::pso::{seeded_experiment_grid, FunctionKind, PsoConfig, TestFunction};
use swarmpart::rng::{child_seed, seeded};
use swarmpart::{Environment, PointSet};

use common::{clusters_into, median, Disk, Plane};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn unit() -> Environment {
    Environment::unit(2)
}

fn configs() -> MethodConfigs {
    MethodConfigs::default()
}

fn partition(algorithm: Algorithm, agents: usize, env: &Environment, seed: u64) -> partitioner::PartitionResult {
    partitioner::run(&PartitionConfig::new(algorithm, agents, seed), env, None).unwrap()
}

fn density_variance(points: &PointSet, env: &Environment, area: f64, seed: u64) -> f64 {
    window_density_test(points, env, 10_000, area, WindowShape::Square, &mut seeded(seed))
        .unwrap()
        .variance
}

fn iteration_count_ratio(start: Instant) -> Outcome {
    let env = unit();
    let seeds: Vec<u64> = (0..60).map(|i| child_seed(1, "c1", i)).collect();
    let totals = |alg| -> Vec<f64> {
        seeds
            .par_iter()
            .map(|&s| {
                let r = partition(alg, 75, &env, s);
                (r.normalization_sweeps + r.iterations_used) as f64
            })
            .collect()
    };
    let onn = median(&totals(Algorithm::Onnrao));
    let rao = median(&totals(Algorithm::Rao));
    let secs = start.elapsed().as_secs_f64();
    let ratio = rao / onn;
    let pass = (300.0..=900.0).contains(&onn) && (4250.0..=12750.0).contains(&rao) && ratio >= 5.0 && secs < 120.0;
    outcome(
        pass,
        format!(
            "median total sweeps over 60 seeds: ONNRAO {onn} (want 300..900), RAO {rao} (want 4250..12750), ratio {ratio:.3} (want >= 5)"
        ),
    )
}

fn cv_reduction(start: Instant) -> Outcome {
    let env = unit();
    let mut parts = Vec::new();
    let mut pass = true;
    for &agents in &[25usize, 100] {
        for alg in [Algorithm::Rao, Algorithm::Onnrao] {
            let wins: usize = (0..100u64)
                .into_par_iter()
                .map(|i| {
                    let s = child_seed(2, &format!("c2-{agents}"), i);
                    let initial = env.sample_points(agents, &mut seeded(s)).unwrap();
                    let before = nn_cv(&initial).unwrap().0;
                    let cfg = PartitionConfig::new(alg, agents, child_seed(s, "run", 0));
                    let r = partitioner::run(&cfg, &env, Some(initial)).unwrap();
                    usize::from(nn_cv(&r.points).unwrap().0 < before)
                })
                .sum();
            pass &= wins >= 95;
            parts.push(format!("{} P={agents}: {wins}/100", alg.name()));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < 600.0;
    outcome(pass, format!("runs with lower NN CV than their random start (want >= 95): {}", parts.join(", ")))
}

fn density_variance_ordering(_: Instant) -> Outcome {
    let env = unit();
    let medians: Vec<f64> = [Method::Cvt, Method::Onnrao, Method::Rao]
        .iter()
        .map(|&m| {
            let v: Vec<f64> = (0..30u64)
                .into_par_iter()
                .map(|i| {
                    let s = child_seed(3, "c3", i);
                    let pts = place(m, 100, &env, &configs(), s).unwrap();
                    density_variance(&pts, &env, 0.01, child_seed(s, "windows", 0))
                })
                .collect();
            median(&v)
        })
        .collect();
    let (cvt, onn, rao) = (medians[0], medians[1], medians[2]);
    outcome(
        cvt < onn && onn < rao,
        format!("median window-count variance, P=100, 30 seeds: CVT {cvt:.4} < ONNRAO {onn:.4} < RAO {rao:.4}"),
    )
}

fn grid_emergence(_: Instant) -> Outcome {
    let env = unit();
    let hits: usize = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let r = partition(Algorithm::Onnrao, 25, &env, child_seed(4, "c4", i));
            let xs: Vec<f64> = r.points.iter().map(|p| p[0]).collect();
            let ys: Vec<f64> = r.points.iter().map(|p| p[1]).collect();
            usize::from(clusters_into(&xs, 5, 3.0) && clusters_into(&ys, 5, 3.0))
        })
        .sum();
    outcome(
        hits >= 18,
        format!("5x5 grids (gaps > 3x within-row spread in both axes): {hits}/20 seeds (want >= 18)"),
    )
}

fn pdf_symmetry(_: Instant) -> Outcome {
    let env = unit();
    let mut control = Heatmap {
        bins: vec![0.0; 100 * 100],
        trials: 1,
        agents_per_trial: 1,
    };
    control.bins[0] = 1.0;
    let control_score = pdf_symmetry_score(&control);
    let mut pass = true;
    let mut parts = Vec::new();
    for m in Method::ALL {
        let h = placement_pdf(m, 13, 1000, &env, &configs(), child_seed(5, m.name(), 0)).unwrap();
        let score = pdf_symmetry_score(&h);
        pass &= score * 10.0 <= control_score;
        parts.push(format!("{} {score:.3}", m.name()));
    }
    outcome(
        pass,
        format!(
            "symmetry scores, P=13, 1000 trials: {} (want <= {:.3}, a tenth of the corner control {control_score:.3})",
            parts.join(", "),
            control_score / 10.0
        ),
    )
}

fn gersho_duals(_: Instant) -> Outcome {
    let env = unit();
    let pooled = |m: Method| -> BTreeMap<usize, usize> {
        let hists: Vec<BTreeMap<usize, usize>> = (0..10u64)
            .into_par_iter()
            .map(|i| {
                let pts = place(m, 100, &env, &configs(), child_seed(6, m.name(), i)).unwrap();
                let mut h = BTreeMap::new();
                for d in dual_degrees(&pts, &env, 1000).unwrap().iter().filter(|d| !d.boundary) {
                    *h.entry(d.degree).or_insert(0) += 1;
                }
                h
            })
            .collect();
        let mut total = BTreeMap::new();
        for h in hists {
            for (k, v) in h {
                *total.entry(k).or_insert(0) += v;
            }
        }
        total
    };
    let cvt = pooled(Method::Cvt);
    let rao = pooled(Method::Rao);
    let (mc, mr) = (histogram_mode(&cvt), histogram_mode(&rao));
    outcome(
        mc == Some(6) && mr == Some(4),
        format!(
            "modal interior dual degree over 10 seeds, P=100: CVT {mc:?} (want 6) {cvt:?}; RAO {mr:?} (want 4) {rao:?}"
        ),
    )
}

fn scree_robustness(_: Instant) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for &(d, p) in &[(2usize, 70usize), (3, 75), (4, 90), (5, 115)] {
        let env = Environment::unit(d);
        let wins: usize = (0..30u64)
            .into_par_iter()
            .map(|i| {
                let s = child_seed(7, &format!("c7-{d}"), i);
                let onn = place(Method::Onnrao, p, &env, &configs(), s).unwrap();
                let rnd = place(Method::Random, p, &env, &configs(), child_seed(s, "random", 0)).unwrap();
                let a = scree_deviation(&pca_scree(&onn).unwrap());
                let b = scree_deviation(&pca_scree(&rnd).unwrap());
                usize::from(a < b)
            })
            .sum();
        pass &= wins >= 20;
        parts.push(format!("D={d} P={p}: {wins}/30"));
    }
    outcome(
        pass,
        format!("seeds where ONNRAO's scree is closer to 1/D than random (want >= 20): {}", parts.join(", ")),
    )
}

fn timing_shape(start: Instant) -> Outcome {
    let algs = [Algorithm::Rao, Algorithm::Onnrao];
    let dims = [2usize, 3, 4, 5];
    let agents = [25usize, 50, 100, 200];
    let runs: Vec<_> = (0..3u64)
        .map(|r| timing_benchmark(&algs, &dims, &agents, 40, child_seed(8, "c8", r)).unwrap())
        .collect();
    let cost = |a: Algorithm, d: usize, p: usize| -> f64 {
        let v: Vec<f64> = runs
            .iter()
            .map(|rows| {
                rows.iter()
                    .find(|r| r.algorithm == a && r.dims == d && r.agents == p)
                    .unwrap()
                    .seconds_per_iter
            })
            .collect();
        median(&v)
    };
    let xs: Vec<f64> = agents.iter().map(|&p| p as f64).collect();
    let mut min_exp = f64::INFINITY;
    let mut max_d_ratio: f64 = 0.0;
    let mut rao_faster = 0;
    let mut cells = 0;
    for a in algs {
        for &d in &dims {
            let ys: Vec<f64> = agents.iter().map(|&p| cost(a, d, p)).collect();
            min_exp = min_exp.min(swarmpart::evaluation::fit_exponent(&xs, &ys));
        }
        for &p in &agents {
            max_d_ratio = max_d_ratio.max(cost(a, 5, p) / cost(a, 2, p));
        }
    }
    for &d in &dims {
        for &p in &agents {
            cells += 1;
            rao_faster += usize::from(cost(Algorithm::Rao, d, p) < cost(Algorithm::Onnrao, d, p));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        min_exp >= 1.5 && max_d_ratio <= 4.0 && rao_faster == cells && secs < 900.0,
        format!(
            "smallest fitted P exponent {min_exp:.3} (want >= 1.5), largest cost(D=5)/cost(D=2) {max_d_ratio:.3} (want <= 4), RAO faster in {rao_faster}/{cells} cells"
        ),
    )
}

fn pso_ordering(_: Instant) -> Outcome {
    let functions: Vec<TestFunction> = [FunctionKind::Rosenbrock, FunctionKind::Griewank, FunctionKind::Schwefel]
        .iter()
        .map(|&k| TestFunction::standard(k, 2))
        .collect();
    let cfg = PsoConfig::default();
    let mut min_seeds = 0;
    let mut ratio_seeds = 0;
    let mut parts = Vec::new();
    for master in [1u64, 2, 3] {
        let summaries = seeded_experiment_grid(&Method::ALL, &functions, 1000, &cfg, &configs(), master).unwrap();
        let eps = |m: Method, f: FunctionKind| {
            summaries
                .iter()
                .find(|s| s.method == m && s.function == f)
                .unwrap()
                .epsilon
        };
        let mut all_min = true;
        let mut cells = Vec::new();
        for f in &functions {
            let best = Method::ALL
                .into_iter()
                .min_by(|&a, &b| eps(a, f.kind).total_cmp(&eps(b, f.kind)))
                .unwrap();
            all_min &= best == Method::Onnrao;
            cells.push(format!(
                "{}[{}]",
                f.kind.name(),
                Method::ALL
                    .iter()
                    .map(|&m| format!("{} {:.3e}", m.name(), eps(m, f.kind)))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
        let ratio = eps(Method::Random, FunctionKind::Griewank) / eps(Method::Onnrao, FunctionKind::Griewank);
        min_seeds += usize::from(all_min);
        ratio_seeds += usize::from(ratio >= 5.0);
        parts.push(format!("seed {master}: {} griewank random/onnrao {ratio:.3}", cells.join(" ")));
    }
    outcome(
        min_seeds >= 2 && ratio_seeds >= 2,
        format!(
            "ONNRAO minimal on all three in {min_seeds}/3 seeds, Griewank ratio >= 5 in {ratio_seeds}/3 seeds; {}",
            parts.join("; ")
        ),
    )
}

fn spacing_ratio(points: &PointSet, center: &[f64], radius: f64) -> f64 {
    let nn = nearest_neighbors(points).unwrap();
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for (p, &q) in nn.iter().enumerate() {
        let d = distance(points.point(p), points.point(q));
        if distance(points.point(p), center) <= radius {
            inside.push(d);
        } else {
            outside.push(d);
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    if inside.is_empty() || outside.is_empty() {
        return f64::NAN;
    }
    mean(&inside) / mean(&outside)
}

fn weighted_regions(_: Instant) -> Outcome {
    let center = vec![0.5, 0.5];
    let radius = 0.25;
    let disk = |weight: f64| WeightedRegion {
        region: Shape::Sphere {
            center: center.clone(),
            radius,
        },
        weight,
    };
    let single = Environment::new(DomainBox::unit(2), vec![], vec![disk(100.0)]).unwrap();
    let opposite = Environment::new(DomainBox::unit(2), vec![], vec![disk(200.0), disk(1.0 / 200.0)]).unwrap();
    let ratios = |env: &Environment| -> Vec<f64> {
        (0..10u64)
            .into_par_iter()
            .map(|i| {
                let r = partition(Algorithm::Onnrao, 100, env, child_seed(10, "c10", i));
                spacing_ratio(&r.points, &center, radius)
            })
            .collect()
    };
    let a = median(&ratios(&single));
    let b = median(&ratios(&opposite));
    outcome(
        a >= 1.5 && (0.7..=1.3).contains(&b),
        format!(
            "median inside/outside NN spacing, ONNRAO P=100, 10 seeds: weight 100 -> {a:.3} (want >= 1.5); weights 200 and 1/200 -> {b:.3} (want 1 +- 0.3)"
        ),
    )
}

fn obstacle_feasibility(_: Instant) -> Outcome {
    let layouts = [
        ("centered", vec![0.35, 0.35], vec![0.65, 0.65]),
        ("offset", vec![0.15, 0.55], vec![0.45, 0.85]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, lower, upper) in layouts {
        let env = Environment::new(DomainBox::unit(2), vec![Shape::Box { lower, upper }], vec![]).unwrap();
        let area = env.feasible_volume() / 45.0;
        let per_seed: Vec<(usize, f64, f64)> = (0..30u64)
            .into_par_iter()
            .map(|i| {
                let s = child_seed(11, name, i);
                let mut violations = 0;
                let mut vars = [0.0; 2];
                for (k, alg) in [Algorithm::Onnrao, Algorithm::Rao].into_iter().enumerate() {
                    let cfg = PartitionConfig::new(alg, 45, child_seed(s, alg.name(), 0));
                    let r = run_observed(&cfg, &env, None, |_, pts| {
                        violations += pts.iter().filter(|p| !env.is_feasible(p).unwrap()).count();
                    })
                    .unwrap();
                    vars[k] = density_variance(&r.points, &env, area, child_seed(s, "windows", 0));
                }
                (violations, vars[0], vars[1])
            })
            .collect();
        let violations: usize = per_seed.iter().map(|t| t.0).sum();
        let wins = per_seed.iter().filter(|t| t.1 <= t.2).count();
        pass &= violations == 0 && wins >= 20;
        parts.push(format!("{name}: {violations} agent-sweeps inside the obstacle, ONNRAO variance <= RAO in {wins}/30"));
    }
    outcome(pass, format!("45 agents, 30 seeds (want 0 and >= 20): {}", parts.join("; ")))
}

fn oracle_equivalence(_: Instant) -> Outcome {
    let start = [[0.12, 0.08], [0.30, 0.22], [0.33, 0.61], [0.71, 0.45], [0.88, 0.91], [0.52, 0.93]];
    let (center, radius, weight) = ([0.5, 0.5], 0.25, 3.0);
    let plane = Plane {
        disks: vec![Disk { center, radius, weight }],
    };
    let env = Environment::new(
        DomainBox::unit(2),
        vec![],
        vec![WeightedRegion {
            region: Shape::Sphere {
                center: center.to_vec(),
                radius,
            },
            weight,
        }],
    )
    .unwrap();
    let mean_expand = 1.5;
    let to_set = |x: &[[f64; 2]]| PointSet::from_points(&x.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap();
    let max_err = |a: &PointSet, b: &[[f64; 2]]| {
        a.iter()
            .zip(b)
            .flat_map(|(p, q)| [(p[0] - q[0]).abs(), (p[1] - q[1]).abs()])
            .fold(0.0, f64::max)
    };

    // ONNRAO sweep: orthogonal step, then nearest-neighbor step.
    let mut lib = to_set(&start);
    let mut rng = seeded(12);
    expand_onn(&mut lib, &env, &mut rng).unwrap();
    let lib_hits_onn = expand_nn(&mut lib, &env, mean_expand, &mut rng).unwrap();
    let mut reference = start;
    let pushed = plane.expand_onn(&mut reference);
    let ref_hits_onn = plane.expand_nn(&mut reference, mean_expand);
    let err_onn = max_err(&lib, &reference);

    // RAO sweep.
    let mut lib = to_set(&start);
    let lib_hits = expand_nn(&mut lib, &env, mean_expand, &mut seeded(12)).unwrap();
    let mut reference = start;
    let ref_hits = plane.expand_nn(&mut reference, mean_expand);
    let err_rao = max_err(&lib, &reference);

    let nontrivial = pushed > 0 && ref_hits > 0 && reference != start;
    outcome(
        err_onn <= 1e-12 && err_rao <= 1e-12 && lib_hits == ref_hits && lib_hits_onn == ref_hits_onn && nontrivial,
        format!(
            "6 agents, weighted disk: max coordinate error ONNRAO {err_onn:.2e}, RAO {err_rao:.2e} (want <= 1e-12); repelling pairs {lib_hits}/{ref_hits}, ONN pushes {pushed}"
        ),
    )
}

type Criterion = (usize, &'static str, fn(Instant) -> Outcome);

const CRITERIA: [Criterion; 12] = [
    (1, "iteration-count ratio", iteration_count_ratio),
    (2, "CV reduction", cv_reduction),
    (3, "density variance ordering", density_variance_ordering),
    (4, "square-grid emergence", grid_emergence),
    (5, "PDF symmetry", pdf_symmetry),
    (6, "Gersho dual degrees", gersho_duals),
    (7, "scree robustness", scree_robustness),
    (8, "timing shape", timing_shape),
    (9, "PSO ordering", pso_ordering),
    (10, "weighted-region response", weighted_regions),
    (11, "obstacle feasibility", obstacle_feasibility),
    (12, "oracle equivalence", oracle_equivalence),
];

fn main() {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, name, f) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let o = f(start);
        let secs = start.elapsed().as_secs_f64();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {tag} {name}: {} [{secs:.1}s]", o.detail);
        if !o.pass {
            failed.push(n);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
