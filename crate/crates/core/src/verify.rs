//! The invariant suite behind `varreg verify`: every check the library can
//! make about one parameter set, collected into a report.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    c_center, c_center_lambda0, check_tangency, extremal_identity_residual, path_bound, r_radius,
    r_radius_lambda0, schwarz_disk, GContext,
};
use crate::extremal::{degenerate_value, dlog_h, h_log_integrand, log_h, ExtremalSpec};
use crate::params::{ClassParams, EvalPoint};
use crate::quadrature::PathSpec;
use crate::region::{
    boundary_curve, contains, hausdorff_distance, is_convex, is_simple, Containment, CONVEXITY_TOL,
};
use crate::samplers::sample_log_f;
use crate::Result;

/// Seed for the random points and members drawn by the suite.
pub const SUITE_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub samples: usize,
    pub coarse_samples: usize,
    pub pointwise_points: usize,
    pub tangency_angles: usize,
    pub members: usize,
    pub max_degree: usize,
    pub trapezoid_steps: usize,
}

impl SuiteConfig {
    pub fn full() -> Self {
        Self {
            samples: 512,
            coarse_samples: 256,
            pointwise_points: 50,
            tangency_angles: 16,
            members: 200,
            max_degree: 4,
            trapezoid_steps: 1_000_000,
        }
    }

    pub fn quick() -> Self {
        Self {
            samples: 256,
            coarse_samples: 128,
            pointwise_points: 10,
            tangency_angles: 4,
            members: 24,
            max_degree: 4,
            trapezoid_steps: 100_000,
        }
    }
}

/// One named invariant: `value` is compared against `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    fn at_most(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: value <= threshold,
            value,
            threshold,
            detail,
        }
    }

    fn at_least(name: &str, value: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: value > threshold,
            value,
            threshold,
            detail,
        }
    }

    fn failed(name: &str, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            value: f64::NAN,
            threshold: f64::NAN,
            detail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub label: String,
    pub params: ClassParams,
    pub z0: EvalPoint,
    pub tol: f64,
    pub quick: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }
}

/// `(mu/pi) z0 * trapezoid(q(t z0), 0..1)` with `steps` panels.
pub fn trapezoid_log_h(spec: &ExtremalSpec, z0: EvalPoint, steps: usize) -> Result<Complex64> {
    let h = 1.0 / steps as f64;
    let mut sum =
        0.5 * (h_log_integrand(spec, Complex64::new(0.0, 0.0))? + h_log_integrand(spec, z0.z0)?);
    for k in 1..steps {
        sum += h_log_integrand(spec, z0.z0 * (k as f64 * h))?;
    }
    Ok(spec.params.mu_over_pi() * z0.z0 * sum * h)
}

fn random_disk_point(rng: &mut ChaCha8Rng, max_modulus: f64) -> Complex64 {
    let r = max_modulus * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-PI..PI))
}

/// Runs a check body, turning a numerical error into a failed check.
fn guarded(name: &str, body: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    body().unwrap_or_else(|e| CheckResult::failed(name, e.to_string()))
}

fn singleton_checks(params: ClassParams, z0: EvalPoint, tol: f64) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let dv = degenerate_value(&params, z0);
    checks.push(guarded("region.singleton", || {
        let mut spread: f64 = 0.0;
        for k in 0..8 {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / 8.0;
            let w = log_h(&ExtremalSpec::boundary(params, theta), z0, tol)?;
            spread = spread.max((w - dv).norm());
        }
        let scaled = spread / (1.0 + dv.norm());
        Ok(CheckResult::at_most(
            "region.singleton",
            scaled,
            1e-9,
            format!("max |log H - degenerate value| = {spread:e}"),
        ))
    }));
    checks.push(guarded("bounds.radial_disk", || {
        let disk = path_bound(&params, &PathSpec::radial(z0.z0, 2)?, tol)?;
        let gap = (disk.center - dv).norm() / (1.0 + dv.norm()) + disk.radius;
        Ok(CheckResult::at_most(
            "bounds.radial_disk",
            gap,
            1e-9,
            format!("radius {:e}", disk.radius),
        ))
    }));
    checks
}

/// Runs every invariant for one parameter set.
pub fn run_suite(
    label: &str,
    params: ClassParams,
    z0: EvalPoint,
    tol: f64,
    quick: bool,
) -> VerifyReport {
    let config = if quick {
        SuiteConfig::quick()
    } else {
        SuiteConfig::full()
    };
    run_suite_with(label, params, z0, tol, quick, &config)
}

pub fn run_suite_with(
    label: &str,
    params: ClassParams,
    z0: EvalPoint,
    tol: f64,
    quick: bool,
    config: &SuiteConfig,
) -> VerifyReport {
    let checks = if crate::region::is_singleton(&params, z0) {
        singleton_checks(params, z0, tol)
    } else {
        region_checks(params, z0, tol, config)
    };
    VerifyReport {
        label: label.to_string(),
        params,
        z0,
        tol,
        quick,
        checks,
    }
}

fn region_checks(
    params: ClassParams,
    z0: EvalPoint,
    tol: f64,
    config: &SuiteConfig,
) -> Vec<CheckResult> {
    let mut checks = Vec::new();
    let curve = match boundary_curve(params, z0, config.samples, tol) {
        Ok(c) => c,
        Err(e) => return vec![CheckResult::failed("region.boundary", e.to_string())],
    };
    let poly = curve.polygon();
    let d = poly.diameter();

    checks.push(guarded("region.convex", || {
        let r = is_convex(&poly, CONVEXITY_TOL)?;
        Ok(CheckResult::at_most(
            "region.convex",
            r.worst_violation,
            CONVEXITY_TOL,
            format!("{} vertices, diameter {d:.6e}", poly.vertices.len()),
        ))
    }));
    checks.push(guarded("region.simple", || {
        let simple = is_simple(&poly)?;
        Ok(CheckResult::at_most(
            "region.simple",
            if simple { 0.0 } else { 1.0 },
            0.0,
            String::new(),
        ))
    }));
    let sep = poly.min_vertex_separation() / d;
    checks.push(CheckResult::at_least(
        "region.injective",
        sep,
        1e-8,
        "min vertex separation / D".into(),
    ));
    checks.push(guarded("region.interior_point", || {
        let margin = poly.signed_margin(degenerate_value(&params, z0))? / d;
        Ok(CheckResult::at_least(
            "region.interior_point",
            margin,
            1e-6,
            "margin of the degenerate value / D".into(),
        ))
    }));
    checks.push(guarded("region.refinement", || {
        let coarse = boundary_curve(params, z0, config.coarse_samples, tol)?.polygon();
        let h = hausdorff_distance(&coarse, &poly) / d;
        Ok(CheckResult::at_most(
            "region.refinement",
            h,
            1e-3,
            format!(
                "Hausdorff({}, {}) / D",
                config.coarse_samples, config.samples
            ),
        ))
    }));
    checks.push(guarded("quadrature.trapezoid", || {
        let mut worst: f64 = 0.0;
        for theta in [0.0, PI / 2.0, PI] {
            let spec = ExtremalSpec::boundary(params, theta);
            let brute = trapezoid_log_h(&spec, z0, config.trapezoid_steps)?;
            let adaptive = log_h(&spec, z0, tol)?;
            worst = worst.max((adaptive - brute).norm() / brute.norm().max(1.0));
        }
        Ok(CheckResult::at_most(
            "quadrature.trapezoid",
            worst,
            1e-6,
            format!("{} trapezoid steps", config.trapezoid_steps),
        ))
    }));
    checks.push(guarded("bounds.pointwise", || {
        let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
        let (mut inside, mut attained, mut identity): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for _ in 0..config.pointwise_points {
            let z = random_disk_point(&mut rng, 0.95);
            let a = random_disk_point(&mut rng, 1.0);
            let theta = rng.gen_range(-PI..PI);
            let disk = schwarz_disk(&params, z);
            let scale = disk.radius.max(f64::MIN_POSITIVE);
            inside = inside.max(disk.excess(dlog_h(&ExtremalSpec::new(params, a), z)?) / scale);
            attained = attained.max(
                disk.excess(dlog_h(&ExtremalSpec::boundary(params, theta), z)?)
                    .abs()
                    / scale,
            );
            identity =
                identity.max(extremal_identity_residual(&GContext::new(params, theta), z)? / scale);
        }
        let worst = inside.max(attained).max(identity);
        Ok(CheckResult::at_most(
            "bounds.pointwise",
            worst,
            1e-10,
            format!("inside {inside:.2e}, attained {attained:.2e}, identity {identity:.2e}"),
        ))
    }));
    checks.push(guarded("bounds.radial_disk", || {
        let disk = path_bound(&params, &PathSpec::radial(z0.z0, 2)?, tol)?;
        let worst = poly
            .vertices
            .iter()
            .map(|&w| disk.excess(w))
            .fold(f64::NEG_INFINITY, f64::max)
            / disk.radius;
        Ok(CheckResult::at_most(
            "bounds.radial_disk",
            worst,
            1e-8,
            format!("center {:.6e}, radius {:.6e}", disk.center, disk.radius),
        ))
    }));
    checks.push(guarded("bounds.starlike", || {
        let mut worst = f64::INFINITY;
        for k in 0..8 {
            let ctx = GContext::new(params, -PI + 2.0 * PI * (k as f64 + 0.5) / 8.0);
            for i in 0..25 {
                for j in 0..5 {
                    let z = Complex64::from_polar(
                        0.95 * (j as f64 + 1.0) / 5.0,
                        2.0 * PI * i as f64 / 25.0,
                    );
                    worst = worst.min(ctx.starlike_shape(z).re);
                }
            }
        }
        Ok(CheckResult::at_least(
            "bounds.starlike",
            worst,
            0.0,
            "min Re(1 + z G''/G')".into(),
        ))
    }));
    checks.push(guarded("bounds.tangency", || {
        let mut worst: f64 = 0.0;
        let mut direction: f64 = 0.0;
        for k in 0..config.tangency_angles {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / config.tangency_angles as f64;
            let r = check_tangency(&GContext::new(params, theta), z0, tol)?;
            worst = worst.max(r.relative_residual);
            direction = direction.max(r.direction_error);
        }
        Ok(CheckResult::at_most(
            "bounds.tangency",
            worst.max(direction),
            1e-6,
            format!(
                "{} angles, residual {worst:.2e}, direction {direction:.2e}",
                config.tangency_angles
            ),
        ))
    }));
    if params.lambda == Complex64::new(0.0, 0.0) {
        checks.push(corollary_check(params));
    }
    checks.push(guarded("samplers.containment", || {
        let values = sample_log_f(
            params,
            z0,
            config.members,
            SUITE_SEED,
            config.max_degree,
            tol,
        )?;
        let mut outside = 0usize;
        for v in &values {
            if contains(&poly, v.value, 1e-6)? == Containment::Outside {
                outside += 1;
            }
        }
        Ok(CheckResult::at_most(
            "samplers.containment",
            outside as f64,
            0.0,
            format!("{} members, {outside} outside", values.len()),
        ))
    }));
    checks
}

fn corollary_check(params: ClassParams) -> CheckResult {
    let lambda = params.lambda;
    let mut worst: f64 = 0.0;
    for i in 0..40 {
        for j in 0..25 {
            let z = Complex64::from_polar(
                0.95 * (i as f64 + 0.5) / 40.0,
                -PI + 2.0 * PI * j as f64 / 25.0,
            );
            let c0 = c_center_lambda0(z);
            let r0 = r_radius_lambda0(z);
            worst = worst
                .max((c_center(z, lambda) - c0).norm() / (1.0 + c0.norm()))
                .max((r_radius(z, lambda) - r0).abs() / (1.0 + r0));
        }
    }
    CheckResult::at_most(
        "bounds.lambda0_formulas",
        worst,
        1e-12,
        "1000-point grid".into(),
    )
}
