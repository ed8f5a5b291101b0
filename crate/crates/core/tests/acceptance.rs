//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and
//! exits non-zero if any fails.

use std::time::{Duration, Instant};

use mdepth::depth::expectile_depth_many;
use mdepth::directions::{affine_grid, circle};
use mdepth::linalg;
use mdepth::oracles::{exponential_expectile, gaussian_depth_profile, gaussian_expectile};
use mdepth::simulate::{centered_exponential_draws, exponential_sample, gaussian_sample, uniform_ball_sample};
use mdepth::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn opts() -> ExpectileDepthOptions<f64> {
    ExpectileDepthOptions::default()
}

fn order(a: f64) -> Order64 {
    Order::new(a).unwrap()
}

fn mean_depth_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 0..50u64 {
        let d = [2, 3, 5][k as usize % 3];
        let n = [50, 500][(k as usize / 3) % 2];
        let s = if k % 2 == 0 { gaussian_sample(n, d, 100 + k) } else { exponential_sample(n, d, 100 + k) }.unwrap();
        let r = expectile_depth(&s, s.mean(), &opts()).unwrap();
        worst = worst.max((r.value - 0.5).abs());
        count += 1;
    }
    outcome(worst <= 1e-12, format!("{count} samples, max |depth - 1/2| = {worst:.2e} (tol 1e-12)"))
}

fn univariate_closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let draws: Vec<f64> = (0..50_000).map(|_| rng.random()).collect();
    let s = Series::new(draws).unwrap();
    let mut worst_interval: f64 = 0.0;
    for k in 1..=9 {
        let z = k as f64 / 10.0;
        let e = s.mdepth(&LossSpec::Quadratic, z).unwrap();
        worst_interval = worst_interval.max((e - ed_uniform_interval(z)).abs());
    }
    let pair = Series::new(vec![0.0, 1.0]).unwrap();
    let mut worst_pair: f64 = 0.0;
    for k in 0..=100 {
        let z = k as f64 / 100.0;
        worst_pair = worst_pair.max((pair.mdepth(&LossSpec::Quadratic, z).unwrap() - ed_uniform_pair(z)).abs());
    }
    outcome(
        worst_interval <= 0.01 && worst_pair <= 1e-12,
        format!("interval max err {worst_interval:.2e} (tol 1e-2), pair max err {worst_pair:.2e} (tol 1e-12)"),
    )
}

fn gaussian_oracle() -> Outcome {
    let s = gaussian_sample(20_000, 2, 3).unwrap();
    let radii = [0.5, 1.0, 2.0];
    let points: Vec<Vec<f64>> = radii.iter().map(|&r| vec![r * 0.7f64.cos(), r * 0.7f64.sin()]).collect();
    let depths = expectile_depth_many(&s, &points, &opts()).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (r, d) in radii.iter().zip(&depths) {
        let target = gaussian_depth_profile(*r);
        worst = worst.max((d.value - target).abs());
        parts.push(format!("r={r}: {:.4} vs {:.4}", d.value, target));
    }
    outcome(worst <= 0.015, format!("{} ; max err {worst:.4} (tol 0.015)", parts.join(", ")))
}

fn ball_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for d in [2usize, 3] {
        let s = uniform_ball_sample(20_000, d, 4 + d as u64).unwrap();
        let radii = [0.25, 0.5, 0.75];
        let points: Vec<Vec<f64>> = radii
            .iter()
            .map(|&r| {
                let mut z = vec![0.0; d];
                z[0] = r * 0.6;
                z[1] = r * 0.8;
                z
            })
            .collect();
        let depths = expectile_depth_many(&s, &points, &opts()).unwrap();
        for (r, dr) in radii.iter().zip(&depths) {
            let target = ed_uniform_ball(*r, d).unwrap();
            worst = worst.max((dr.value - target).abs());
            parts.push(format!("d={d} r={r}: {:.4} vs {:.4}", dr.value, target));
        }
    }
    outcome(worst <= 0.02, format!("{} ; max err {worst:.4} (tol 0.02)", parts.join(", ")))
}

fn random_affine(rng: &mut ChaCha8Rng) -> ([f64; 4], [f64; 2]) {
    let rot = |t: f64| [t.cos(), -t.sin(), t.sin(), t.cos()];
    let mul = |a: [f64; 4], b: [f64; 4]| {
        [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
    };
    let s1: f64 = rng.random_range(0.2..5.0);
    let ratio = rng.random_range(0.0..40f64.ln()).exp();
    let flip = if rng.random::<bool>() { -1.0 } else { 1.0 };
    let diag = [s1 * flip, 0.0, 0.0, s1 * ratio];
    let a = mul(mul(rot(rng.random_range(0.0..6.3)), diag), rot(rng.random_range(0.0..6.3)));
    let b = [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)];
    (a, b)
}

fn condition_number(a: &[f64; 4]) -> f64 {
    let fro2 = a.iter().map(|x| x * x).sum::<f64>();
    let det = (a[0] * a[3] - a[1] * a[2]).abs();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    ((fro2 + disc) / (fro2 - disc)).sqrt()
}

fn nearest(v: &[f64; 2], set: &[[f64; 2]]) -> f64 {
    set.iter().map(|w| ((v[0] - w[0]).powi(2) + (v[1] - w[1]).powi(2)).sqrt()).fold(f64::INFINITY, f64::min)
}

fn affine_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let s = exponential_sample(300, 2, 55).unwrap();
    let grid = circle(360);
    let losses = [LossSpec::Quadratic, LossSpec::Absolute, LossSpec::Power(1.5)];
    let probes: Vec<[f64; 2]> = (0..10).map(|_| [rng.random_range(0.0..2.5), rng.random_range(0.0..2.5)]).collect();
    let mut depth_err: f64 = 0.0;
    let mut vertex_err: f64 = 0.0;
    let mut max_cond: f64 = 0.0;
    for _ in 0..20 {
        let (a, b) = random_affine(&mut rng);
        max_cond = max_cond.max(condition_number(&a));
        let a_inv = linalg::invert(&a, 2).unwrap();
        let sa = s.affine_image(&a, &b).unwrap();
        let grid_a = affine_grid(&grid, &a_inv);
        let map = |z: &[f64; 2]| [a[0] * z[0] + a[1] * z[1] + b[0], a[2] * z[0] + a[3] * z[1] + b[1]];
        for loss in &losses {
            for z in &probes {
                let d0 = mdepth_grid(&s, loss, z, &grid).unwrap().value;
                let d1 = mdepth_grid(&sa, loss, &map(z), &grid_a).unwrap().value;
                depth_err = depth_err.max((d0 - d1).abs());
            }
            for alpha in [0.1, 0.25] {
                let r0 = region_from_directions(&s, loss, order(alpha), &grid).unwrap();
                let r1 = region_from_directions(&sa, loss, order(alpha), &grid_a).unwrap();
                let mapped: Vec<[f64; 2]> = r0.vertices.iter().map(map).collect();
                if mapped.is_empty() != r1.vertices.is_empty() {
                    vertex_err = f64::INFINITY;
                    continue;
                }
                for v in &mapped {
                    vertex_err = vertex_err.max(nearest(v, &r1.vertices) / v[0].hypot(v[1]).max(1.0));
                }
                for v in &r1.vertices {
                    vertex_err = vertex_err.max(nearest(v, &mapped) / v[0].hypot(v[1]).max(1.0));
                }
            }
        }
    }
    outcome(
        max_cond <= 50.0 && depth_err <= 1e-9 && vertex_err <= 1e-6,
        format!(
            "20 maps (max cond {max_cond:.1}), depth err {depth_err:.2e} (tol 1e-9), vertex rel err {vertex_err:.2e} (tol 1e-6)"
        ),
    )
}

fn region_depth_duality() -> Outcome {
    let s = exponential_sample(400, 2, 6).unwrap();
    let grid = circle(500);
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let bx = ClipBox::around(&s, 0.1);
    let probes: Vec<[f64; 2]> =
        (0..200).map(|_| [rng.random_range(bx.xmin..bx.xmax), rng.random_range(bx.ymin..bx.ymax)]).collect();
    let mut violations = 0;
    let mut checks = 0;
    for loss in [LossSpec::Quadratic, LossSpec::Absolute] {
        for alpha in [0.05, 0.15, 0.3] {
            let region = region_from_directions(&s, &loss, order(alpha), &grid).unwrap();
            for z in &probes {
                let depth = mdepth_grid(&s, &loss, z, &grid).unwrap().value;
                checks += 1;
                if region.contains(z) != (depth >= alpha) {
                    violations += 1;
                }
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations in {checks} checks"))
}

fn tukey_cross_check() -> Outcome {
    let s = gaussian_sample::<f64>(200, 2, 7).unwrap();
    let grid = circle(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut gap: f64 = 0.0;
    for _ in 0..50 {
        let z = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        let g = mdepth_grid(&s, &LossSpec::Absolute, &z, &grid).unwrap().value;
        let e = tukey_depth_2d_exact(&s, &z).unwrap();
        gap = gap.max((g - e).abs());
    }
    outcome(gap <= 0.01, format!("max |grid - exact| = {gap:.4} (tol 0.01)"))
}

fn ray_monotonicity() -> Outcome {
    let s = exponential_sample(2000, 2, 8).unwrap();
    let mu = s.mean().to_vec();
    let mut failures = 0;
    let mut min_drop = f64::INFINITY;
    for k in 0..16 {
        let u = Direction::from_angle(std::f64::consts::TAU * k as f64 / 16.0);
        let rmax = support_radius(&s, &mu, &u).unwrap();
        let points: Vec<Vec<f64>> = (0..=20)
            .map(|j| {
                let r = rmax * j as f64 / 20.0 * if j == 20 { 1.01 } else { 1.0 };
                vec![mu[0] + r * u.as_slice()[0], mu[1] + r * u.as_slice()[1]]
            })
            .collect();
        let depths: Vec<f64> = expectile_depth_many(&s, &points, &opts()).unwrap().iter().map(|r| r.value).collect();
        for j in 0..19 {
            let (a, b) = (depths[j], depths[j + 1]);
            if a > 1e-9 {
                min_drop = min_drop.min(a - b);
                if b >= a || b.is_nan() {
                    failures += 1;
                }
            } else if b > 1e-9 {
                failures += 1;
            }
        }
        if depths[20] != 0.0 {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("16 rays x 20 radii, {failures} failures, smallest drop {min_drop:.2e}"))
}

fn great_circle_profile() -> Outcome {
    let s = exponential_sample(10_000, 2, 9).unwrap();
    let z = [0.8, 0.8];
    let profile: Vec<f64> = (0..720)
        .map(|k| {
            let u = Direction::from_angle(std::f64::consts::TAU * k as f64 / 720.0);
            mdepth::expectile_outlyingness(&s, &z, &u).unwrap()
        })
        .collect();
    let signs: Vec<bool> = (0..720)
        .filter_map(|k| {
            let d = profile[(k + 1) % 720] - profile[k];
            (d.abs() >= 1e-6).then_some(d > 0.0)
        })
        .collect();
    let changes = (0..signs.len()).filter(|&k| signs[k] != signs[(k + 1) % signs.len()]).count();
    let lo = profile.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = profile.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    outcome(
        changes == 2,
        format!("{changes} turning points (want 2: one minimal, one maximal arc), range [{lo:.4}, {hi:.4}]"),
    )
}

fn risk_coherency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut fails = [0usize; 5];
    let alphas_lo = [0.05, 0.25, 0.5];
    let alphas_hi = [0.5, 0.75, 0.95];
    for i in 0..100u64 {
        let x =
            if i % 2 == 0 { exponential_sample(200, 2, 1000 + i) } else { gaussian_sample(200, 2, 1000 + i) }.unwrap();
        let y = exponential_sample(200, 2, 5000 + i).unwrap();
        let any_u = Direction::from_angle(rng.random_range(0.0..std::f64::consts::TAU));
        let pos_u = Direction::from_angle(rng.random_range(0.0..std::f64::consts::FRAC_PI_2));
        let a_all = [0.05, 0.25, 0.5, 0.75, 0.95][i as usize % 5];
        let shift = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
        let lambda = rng.random_range(0.1..10.0);
        let dominated = x.add(&y).unwrap();
        let checks = [
            check_translation(&x, &shift, order(a_all), &any_u),
            check_homogeneity(&x, lambda, order(a_all), &any_u),
            check_monotonicity(&x, &dominated, order(a_all), &pos_u),
            check_subadditivity(&x, &y, order(alphas_lo[i as usize % 3]), &any_u),
            check_superadditivity(&x, &y, order(alphas_hi[i as usize % 3]), &any_u),
        ];
        for (f, c) in fails.iter_mut().zip(checks) {
            if !c.map(|r| r.holds).unwrap_or(false) {
                *f += 1;
            }
        }
    }
    outcome(
        fails.iter().all(|&f| f == 0),
        format!(
            "failures of 100 each: translation {}, homogeneity {}, monotonicity {}, subadditivity {}, superadditivity {}",
            fails[0], fails[1], fails[2], fails[3], fails[4]
        ),
    )
}

fn regression_recovery() -> Outcome {
    let data = simulate_hetero::<f64>(10_000, 11).unwrap();
    let eps = Series::new(centered_exponential_draws(1_000_000, 111)).unwrap();
    let e1 = Direction::new(vec![1.0, 0.0]).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for alpha in [0.1, 0.5] {
        let e_alpha = eps.expectile(order(alpha));
        parts.push(format!("e_{alpha} = {e_alpha:.4} (population {:.4})", exponential_expectile(order(alpha)) - 1.0));
        for x in [0.3, 0.5, 0.9] {
            let h = conditional_halfspace(&data, order(alpha), &e1, &[x], &Engine::Linear).unwrap();
            let target = 4.0 * x + (x / 3.0f64).sqrt() * e_alpha;
            worst = worst.max((h.theta - target).abs());
        }
    }
    outcome(worst <= 0.05, format!("{} ; max err {worst:.4} (tol 0.05)", parts.join(", ")))
}

fn region_consistency_trend() -> Outcome {
    let alpha = 0.2;
    let grid = circle(500);
    let radius = -gaussian_expectile(order(alpha));
    let disk_halfspaces = grid.iter().map(|u| Hyperplane::new(u.clone(), -radius)).collect();
    let disk = Region2D::from_halfspaces(disk_halfspaces, ClipBox { xmin: -5.0, xmax: 5.0, ymin: -5.0, ymax: 5.0 });
    let mut decreasing = 0;
    let mut chain = 0;
    let mut rows = Vec::new();
    for seed in 0..10u64 {
        let h: Vec<f64> = [500, 5_000, 50_000]
            .iter()
            .map(|&n| {
                let s = gaussian_sample(n, 2, 1200 + seed).unwrap();
                let r = region_from_directions(&s, &LossSpec::Quadratic, order(alpha), &grid).unwrap();
                region_hausdorff(&r, &disk).unwrap()
            })
            .collect();
        if h[2] < h[0] {
            decreasing += 1;
        }
        if h[2] < h[1] && h[1] < h[0] {
            chain += 1;
        }
        rows.push(format!("{:.3}>{:.3}", h[0], h[2]));
    }
    outcome(
        decreasing >= 9,
        format!(
            "decreasing in {decreasing}/10 seeds (need 9; monotone over all three sizes in {chain}/10): {}",
            rows.join(" ")
        ),
    )
}

type Check = (&'static str, u64, fn() -> Outcome);

fn main() {
    let checks: [Check; 12] = [
        ("mean-depth identity", 5, mean_depth_identity),
        ("univariate closed forms", 5, univariate_closed_forms),
        ("Gaussian oracle", 20, gaussian_oracle),
        ("uniform-ball oracle", 30, ball_oracle),
        ("affine equivariance", 10, affine_equivariance),
        ("region-depth duality", 10, region_depth_duality),
        ("Tukey cross-check", 5, tukey_cross_check),
        ("ray monotonicity", 10, ray_monotonicity),
        ("great-circle profile", 5, great_circle_profile),
        ("risk coherency", 5, risk_coherency),
        ("regression recovery", 20, regression_recovery),
        ("region consistency trend", 60, region_consistency_trend),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let took = start.elapsed();
        let pass = out.pass && took <= Duration::from_secs(*limit);
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {:<26} {:>6.2} s (limit {limit} s)  {}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            took.as_secs_f64(),
            out.detail
        );
    }
    println!("{} of {} acceptance checks passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
