//! Acceptance criteria, one PASS/FAIL line each. Runs as a plain binary so
//! the lines show up in `cargo test` output; exits non-zero on any failure.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use varreg::bounds::{
    check_tangency, extremal_identity_residual, path_bound, schwarz_disk, GContext,
};
use varreg::extremal::{dlog_h, log_h, ExtremalSpec};
use varreg::presets::{find, FigurePreset, PRESETS};
use varreg::quadrature::PathSpec;
use varreg::region::{boundary_curve, contains, is_convex, is_simple, Containment, RegionPolygon};
use varreg::samplers::sample_log_f;
use varreg::{ClassParams, Complex64, EvalPoint};

const TOL: f64 = 1e-10;
const N: usize = 512;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    summary: String,
}

fn outcome(passed: bool, summary: String) -> Outcome {
    Outcome { passed, summary }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn polygon(p: &FigurePreset, n: usize) -> RegionPolygon {
    boundary_curve(p.params(), p.eval_point(), n, TOL)
        .unwrap()
        .polygon()
}

/// `(mu/pi)(Log(1 - z0) - Log(1 - lambda z0))`, written out independently.
fn degenerate(mu: Complex64, lambda: Complex64, z0: Complex64) -> Complex64 {
    mu / PI * ((c(1.0, 0.0) - z0).ln() - (c(1.0, 0.0) - lambda * z0).ln())
}

fn boundary_regeneration() -> Outcome {
    let mut worst_time = Duration::ZERO;
    let mut bad = Vec::new();
    for p in &PRESETS {
        let start = Instant::now();
        let curve = boundary_curve(p.params(), p.eval_point(), N, TOL).unwrap();
        worst_time = worst_time.max(start.elapsed());
        let poly = curve.polygon();
        let convex = is_convex(&poly, 1e-9).unwrap();
        if curve.samples.len() != N || !convex.convex || !is_simple(&poly).unwrap() {
            bad.push(p.id);
        }
    }
    let passed = bad.is_empty() && worst_time < Duration::from_secs(2);
    outcome(
        passed,
        format!("non-convex or non-simple: {bad:?}, slowest preset {worst_time:?}"),
    )
}

fn degenerate_collapse() -> Outcome {
    let base = find("1L").unwrap();
    let mut worst: f64 = 0.0;
    let thetas: Vec<f64> = (0..32)
        .map(|k| -PI + 2.0 * PI * (k as f64 + 0.5) / 32.0)
        .collect();
    let mut check = |params: ClassParams, z0: Complex64| {
        let dv = degenerate(params.mu, params.lambda, z0);
        for &t in &thetas {
            let w = log_h(&ExtremalSpec::boundary(params, t), EvalPoint::new(z0), TOL).unwrap();
            worst = worst.max((w - dv).norm() / (1.0 + dv.norm()));
        }
    };
    for k in 0..8 {
        let lambda = Complex64::from_polar(1.0, -PI + 2.0 * PI * k as f64 / 8.0 + 0.1);
        check(ClassParams::new(base.mu, lambda), base.z0);
    }
    for p in &PRESETS {
        check(p.params(), c(0.0, 0.0));
    }
    outcome(
        worst < 1e-9,
        format!("max spread / (1 + |value|) = {worst:.3e}"),
    )
}

fn interior_point() -> Outcome {
    let mut worst = f64::INFINITY;
    for p in &PRESETS {
        let poly = polygon(p, N);
        let m = poly
            .signed_margin(degenerate(p.mu, p.lambda, p.z0))
            .unwrap()
            / poly.diameter();
        worst = worst.min(m);
    }
    outcome(worst > 1e-6, format!("min margin / D = {worst:.3e}"))
}

fn pointwise_extremality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut inside, mut attained, mut identity): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for p in &PRESETS {
        let params = p.params();
        for _ in 0..50 {
            let z = Complex64::from_polar(0.98 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
            let a = Complex64::from_polar(rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
            let theta = rng.gen_range(-PI..PI);
            let disk = schwarz_disk(&params, z);
            let r = disk.radius;
            inside = inside.max(disk.excess(dlog_h(&ExtremalSpec::new(params, a), z).unwrap()) / r);
            attained = attained.max(
                disk.excess(dlog_h(&ExtremalSpec::boundary(params, theta), z).unwrap())
                    .abs()
                    / r,
            );
            identity = identity
                .max(extremal_identity_residual(&GContext::new(params, theta), z).unwrap() / r);
        }
    }
    let passed = inside <= 1e-10 && attained <= 1e-10 && identity < 1e-10;
    outcome(passed, format!("excess {inside:.2e}, attainment {attained:.2e}, identity {identity:.2e} (relative to radius)"))
}

fn path_bound_containment() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for p in &PRESETS {
        let disk = path_bound(&p.params(), &PathSpec::radial(p.z0, 2).unwrap(), TOL).unwrap();
        for w in polygon(p, N).vertices {
            worst = worst.max(disk.excess(w) / disk.radius);
        }
    }
    outcome(
        worst <= 1e-8,
        format!("max (|w - center| - radius) / radius = {worst:.3e}"),
    )
}

fn tangency() -> Outcome {
    let (mut residual, mut direction): (f64, f64) = (0.0, 0.0);
    for p in &PRESETS {
        for k in 0..16 {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / 16.0;
            let r = check_tangency(&GContext::new(p.params(), theta), p.eval_point(), TOL).unwrap();
            residual = residual.max(r.relative_residual);
            direction = direction.max(r.direction_error);
        }
    }
    outcome(
        residual < 1e-6 && direction < 1e-6,
        format!("max relative residual {residual:.2e}, max direction error {direction:.2e}"),
    )
}

fn sampler_containment() -> Outcome {
    let mut outside = 0;
    let mut total = 0;
    for p in &PRESETS {
        let poly = polygon(p, N);
        for v in sample_log_f(p.params(), p.eval_point(), 200, 1000, 4, TOL).unwrap() {
            total += 1;
            if contains(&poly, v.value, 1e-6).unwrap() == Containment::Outside {
                outside += 1;
            }
        }
    }
    outcome(
        outside == 0,
        format!("{outside} of {total} sampled values outside"),
    )
}

/// Composite trapezoid of `log H` along the segment, with the integrand
/// written out from its definition.
fn trapezoid(
    mu: Complex64,
    lambda: Complex64,
    a: Complex64,
    z0: Complex64,
    steps: usize,
) -> Complex64 {
    let one = c(1.0, 0.0);
    let q = |s: Complex64| {
        ((lambda - one) + (one - lambda.conj()) * a * s)
            / ((one - s) * (one + (lambda.conj() * a - lambda) * s - a * s * s))
    };
    let h = 1.0 / steps as f64;
    let mut sum = (q(c(0.0, 0.0)) + q(z0)) * 0.5;
    for k in 1..steps {
        sum += q(z0 * (k as f64 * h));
    }
    mu / PI * z0 * sum * h
}

fn quadrature_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    for id in ["1R", "3L", "6R"] {
        let p = find(id).unwrap();
        for theta in [0.0, PI / 2.0, PI] {
            let a = Complex64::from_polar(1.0, theta);
            let brute = trapezoid(p.mu, p.lambda, a, p.z0, 1_000_000);
            let adaptive = log_h(&ExtremalSpec::new(p.params(), a), p.eval_point(), TOL).unwrap();
            worst = worst.max((adaptive - brute).norm() / brute.norm());
        }
    }
    outcome(worst < 1e-6, format!("max relative difference {worst:.3e}"))
}

fn lambda_zero_corollary() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..40 {
        for j in 0..25 {
            let z = Complex64::from_polar(
                0.99 * (i as f64 + 0.5) / 40.0,
                -PI + 2.0 * PI * j as f64 / 25.0,
            );
            let m2 = z.norm_sqr();
            let center = (z.conj() * m2 - 1.0) / ((c(1.0, 0.0) - z) * (1.0 - m2 * m2));
            let radius = z.norm() / (1.0 - m2 * m2);
            let params = ClassParams::new(c(PI, 0.0), c(0.0, 0.0));
            let disk = schwarz_disk(&params, z);
            worst = worst
                .max((disk.center - center).norm() / (1.0 + center.norm()))
                .max((disk.radius - radius).abs() / (1.0 + radius));
        }
    }
    outcome(
        worst < 1e-12,
        format!("max relative difference {worst:.3e} on 1000 points"),
    )
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let e = b - a;
    let s = if e.norm_sqr() > 0.0 {
        ((p - a) * e.conj()).re / e.norm_sqr()
    } else {
        0.0
    };
    (p - (a + e * s.clamp(0.0, 1.0))).norm()
}

fn directed_hausdorff(from: &[Complex64], to: &[Complex64]) -> f64 {
    let n = from.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for k in 0..8 {
            let p = from[i] + (from[(i + 1) % n] - from[i]) * (k as f64 / 8.0);
            let d = (0..to.len())
                .map(|j| segment_distance(p, to[j], to[(j + 1) % to.len()]))
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(d);
        }
    }
    worst
}

fn refinement_stability() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in &PRESETS {
        let fine = polygon(p, 512);
        let coarse = polygon(p, 256);
        let h = directed_hausdorff(&fine.vertices, &coarse.vertices)
            .max(directed_hausdorff(&coarse.vertices, &fine.vertices));
        worst = worst.max(h / fine.diameter());
    }
    outcome(
        worst < 1e-3,
        format!("max Hausdorff(256, 512) / D = {worst:.3e}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("boundary regeneration", boundary_regeneration),
        ("degenerate collapse", degenerate_collapse),
        ("interior point", interior_point),
        ("pointwise extremality", pointwise_extremality),
        ("path bound", path_bound_containment),
        ("tangency", tangency),
        ("sampler containment", sampler_containment),
        ("quadrature oracle", quadrature_oracle),
        ("lambda = 0 corollary", lambda_zero_corollary),
        ("refinement stability", refinement_stability),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        if !o.passed {
            failures += 1;
        }
        println!(
            "{} criterion {:>2} {:<24} {} [{:.2?}]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            name,
            o.summary,
            start.elapsed()
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
