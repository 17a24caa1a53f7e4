//! Disk bounds for `f'/f` and `log f(z0)`, the auxiliary function `G` and the
//! extremal path along which the path-integrated disk touches the region.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::extremal::{dlog_h, log_h, ExtremalSpec};
use crate::params::{ClassParams, EvalPoint};
use crate::quadrature::{
    hermite, integrate_line, integrate_path, newton_continue, panel_index, ContinuationTarget,
    PathEval, PathKind, PathMode, PathNode, PathSpec, QuadratureResult, Tolerance, NEWTON_MAX_ITER,
};
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Closed disk `|w - center| <= radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskBound {
    pub center: Complex64,
    pub radius: f64,
}

impl DiskBound {
    /// `|w - center| - radius`; non-positive inside.
    pub fn excess(&self, w: Complex64) -> f64 {
        (w - self.center).norm() - self.radius
    }

    pub fn contains(&self, w: Complex64, slack: f64) -> bool {
        self.excess(w) <= slack
    }
}

/// Center of the pointwise disk for `f'/f`, without the `mu/pi` factor.
pub fn c_center(z: Complex64, lambda: Complex64) -> Complex64 {
    let m2 = z.norm_sqr();
    let num = (z.conj() - lambda) * (ONE - lambda.conj()) * m2
        - (ONE - lambda) * (ONE - lambda.conj() * z.conj());
    let den = (ONE - z) * ((1.0 - m2) * (1.0 + m2 - 2.0 * (lambda * z).re));
    num / den
}

/// Radius of the pointwise disk for `f'/f`, without the `|mu|/pi` factor.
pub fn r_radius(z: Complex64, lambda: Complex64) -> f64 {
    let m2 = z.norm_sqr();
    (1.0 - lambda.norm_sqr()).max(0.0) * z.norm()
        / ((1.0 - m2) * (1.0 + m2 - 2.0 * (lambda * z).re))
}

/// `c_center` at `lambda = 0` in its simplified form.
pub fn c_center_lambda0(z: Complex64) -> Complex64 {
    let m2 = z.norm_sqr();
    (z.conj() * m2 - ONE) / ((ONE - z) * (1.0 - m2 * m2))
}

/// `r_radius` at `lambda = 0` in its simplified form.
pub fn r_radius_lambda0(z: Complex64) -> f64 {
    let m2 = z.norm_sqr();
    z.norm() / (1.0 - m2 * m2)
}

/// Pointwise bound on `f'/f(z)` over the whole class.
pub fn schwarz_disk(params: &ClassParams, z: Complex64) -> DiskBound {
    DiskBound {
        center: params.mu_over_pi() * c_center(z, params.lambda),
        radius: params.abs_mu_over_pi() * r_radius(z, params.lambda),
    }
}

/// Integrated disk bound along a path from `0` to `z0`, with the quadrature
/// error estimates of both integrals (after scaling).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathBoundReport {
    pub disk: DiskBound,
    pub center_err: f64,
    pub radius_err: f64,
}

pub fn path_bound_detailed(
    params: &ClassParams,
    path: &PathSpec,
    tol: f64,
) -> Result<PathBoundReport> {
    let lambda = params.lambda;
    let center: QuadratureResult =
        integrate_path(|z| Ok(c_center(z, lambda)), path, PathMode::Value, tol)?;
    let radius = if params.lambda_is_unimodular() {
        QuadratureResult {
            value: ZERO,
            err_estimate: 0.0,
            evaluations: 0,
        }
    } else {
        integrate_path(
            |z| Ok(Complex64::new(r_radius(z, lambda), 0.0)),
            path,
            PathMode::Modulus,
            tol,
        )?
    };
    Ok(PathBoundReport {
        disk: DiskBound {
            center: params.mu_over_pi() * center.value,
            radius: params.abs_mu_over_pi() * radius.value.re,
        },
        center_err: params.abs_mu_over_pi() * center.err_estimate,
        radius_err: params.abs_mu_over_pi() * radius.err_estimate,
    })
}

/// The disk containing the whole region obtained by integrating the
/// pointwise bound along `path`.
pub fn path_bound(params: &ClassParams, path: &PathSpec, tol: f64) -> Result<DiskBound> {
    path_bound_detailed(params, path, tol).map(|r| r.disk)
}

/// Roots of `1 + (conj(lambda) e^{i theta} - lambda) z - e^{i theta} z^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GRoots {
    pub b: f64,
    pub z1: Complex64,
    pub z2: Complex64,
}

pub fn g_roots(theta: f64, lambda: Complex64) -> GRoots {
    let half = Complex64::from_polar(1.0, 0.5 * theta);
    let b = (lambda.conj() * half).im.clamp(-1.0, 1.0);
    let s = (1.0 - b * b).sqrt();
    let rot = half.conj();
    GRoots {
        b,
        z1: rot * Complex64::new(s, b),
        z2: rot * Complex64::new(-s, b),
    }
}

/// Everything needed to evaluate `G` for one boundary angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GContext {
    pub theta: f64,
    pub params: ClassParams,
    pub b: f64,
    pub z1: Complex64,
    pub z2: Complex64,
}

impl GContext {
    pub fn new(params: ClassParams, theta: f64) -> Self {
        let GRoots { b, z1, z2 } = g_roots(theta, params.lambda);
        Self {
            theta,
            params,
            b,
            z1,
            z2,
        }
    }

    fn rotation(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// `1 + (conj(lambda) e^{i theta} - lambda) z - e^{i theta} z^2`.
    pub fn quadratic(&self, z: Complex64) -> Complex64 {
        let e = self.rotation();
        let lam = self.params.lambda;
        ONE + (lam.conj() * e - lam) * z - e * z * z
    }

    /// `G'` without the `mu/pi` factor.
    pub fn unit_derivative(&self, z: Complex64) -> Result<Complex64> {
        let q = self.quadratic(z);
        crate::mobius::checked_div(self.rotation() * z, q * q, "G quadratic squared")
    }

    /// Closed-form `G'(z)`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.params.mu_over_pi() * self.unit_derivative(z)?)
    }

    /// `G''/G'` from the factored quadratic.
    pub fn log_derivative_of_derivative(&self, z: Complex64) -> Complex64 {
        ONE / z + 2.0 / (self.z1 - z) + 2.0 / (self.z2 - z)
    }

    /// `1 + z G''(z)/G'(z)`, whose real part is positive on the disk.
    pub fn starlike_shape(&self, z: Complex64) -> Complex64 {
        2.0 * ONE + 2.0 * z / (self.z1 - z) + 2.0 * z / (self.z2 - z)
    }

    /// `G` without the `mu/pi` factor, integrated from `from` where it equals `g_from`.
    fn unit_value_from(
        &self,
        from: Complex64,
        g_from: Complex64,
        z: Complex64,
    ) -> Result<Complex64> {
        let r = integrate_line(|zeta| self.unit_derivative(zeta), from, z, INNER_TOL)?;
        Ok(g_from + r.value)
    }
}

/// Relative accuracy of the inner `G` integrals driving the extremal path.
const INNER_TOL: Tolerance = Tolerance {
    abs: 0.0,
    rel: 1e-13,
};

/// `G(z)` by segment quadrature from the origin with absolute tolerance `tol`
/// (before the `mu/pi` factor).
#[allow(non_snake_case)]
pub fn G_eval(ctx: &GContext, z: Complex64, tol: f64) -> Result<Complex64> {
    let r = integrate_line(
        |zeta| ctx.unit_derivative(zeta),
        ZERO,
        z,
        Tolerance::absolute(tol),
    )?;
    Ok(ctx.params.mu_over_pi() * r.value)
}

/// Uniform continuation nodes on `[T_MIN, 1]`.
pub const GAMMA0_NODES: usize = 257;
/// First continuation time; the path on `[0, T_MIN]` follows from the
/// asymptotics `z(t) ~ t G0(z0)`.
pub const T_MIN: f64 = 1e-3;
/// Required agreement of `z(1)` with `z0`.
pub const END_TOL: f64 = 1e-10;

/// The extremal path `z(t) = G0^{-1}(t G0(z0))` with its defining data.
#[derive(Debug, Clone)]
pub struct Gamma0 {
    pub path: PathSpec,
    /// `G(z0)`, including the `mu/pi` factor.
    pub g_at_z0: Complex64,
    /// The square-root branch `G0(z0)` that reached `z0`.
    pub g0_at_z0: Complex64,
    /// `max |G(z(t)) - t^2 G(z0)| / |G(z0)|` over the nodes.
    pub max_relative_residual: f64,
    pub max_modulus: f64,
}

struct UnitG<'a>(&'a GContext);

impl ContinuationTarget for UnitG<'_> {
    fn value(&self, z: Complex64) -> Result<Complex64> {
        self.0.unit_value_from(ZERO, ZERO, z)
    }
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        self.0.unit_derivative(z)
    }
}

/// Evaluates the extremal path between its nodes by solving
/// `g(z) = t^2 g(z0)` with Newton, integrating `g` from the nearest node.
struct Gamma0Eval {
    ctx: GContext,
    nodes: Vec<PathNode>,
    values: Vec<Complex64>,
    g_z0: Complex64,
}

impl PathEval for Gamma0Eval {
    fn point(&self, t: f64) -> Result<(Complex64, Complex64)> {
        let k = panel_index(&self.nodes, t);
        let near = if t - self.nodes[k].t <= self.nodes[k + 1].t - t {
            k
        } else {
            k + 1
        };
        if self.nodes[near].t == t {
            let n = self.nodes[near];
            return Ok((n.z, n.dz));
        }
        let (z_ref, g_ref) = (self.nodes[near].z, self.values[near]);
        let goal = self.g_z0 * (t * t);
        let mut z = hermite(&self.nodes, t).0;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let r = self.ctx.unit_value_from(z_ref, g_ref, z)? - goal;
            if r.norm() <= 1e-14 * goal.norm() {
                converged = true;
                break;
            }
            let step = r / self.ctx.unit_derivative(z)?;
            z -= step;
            if step.norm() <= 1e-14 * z.norm() {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ContinuationStall { t });
        }
        if !(z.norm() < 1.0) {
            return Err(Error::LeftDisk {
                t,
                modulus: z.norm(),
            });
        }
        let dz = self.g_z0 * (2.0 * t) / self.ctx.unit_derivative(z)?;
        Ok((z, dz))
    }
}

/// Traces the extremal path with `n` uniform continuation nodes on
/// `[T_MIN, 1]` plus the origin. Both square-root branches of `G0(z0)` are
/// tried; the one whose continuation stays in the disk and ends at `z0` is kept.
pub fn trace_gamma0(ctx: &GContext, z0: EvalPoint, n: usize) -> Result<Gamma0> {
    if z0.is_origin() {
        return Err(Error::InvalidPath("the extremal path needs z0 != 0".into()));
    }
    if ctx.params.lambda_is_unimodular() {
        return Err(Error::InvalidPath(
            "the extremal path needs |lambda| < 1".into(),
        ));
    }
    let n = n.max(2);
    let target = UnitG(ctx);
    let g_z0 = target.value(z0.z0)?;
    let g0 = (2.0 * Complex64::from_polar(1.0, -ctx.theta) * g_z0).sqrt();
    let grid: Vec<f64> = (0..n)
        .map(|k| T_MIN + (1.0 - T_MIN) * k as f64 / (n - 1) as f64)
        .collect();
    let rhs = move |t: f64| g_z0 * (t * t);
    let rhs_prime = move |t: f64| g_z0 * (2.0 * t);

    let mut failures = Vec::new();
    let mut accepted = None;
    for branch in [g0, -g0] {
        match newton_continue(&target, &rhs, &rhs_prime, branch * T_MIN, &grid) {
            Ok(run) => {
                let end = run.nodes.last().expect("non-empty grid").z;
                let miss = (end - z0.z0).norm();
                if miss <= END_TOL {
                    accepted = Some((branch, run));
                    break;
                }
                failures.push(format!(
                    "branch {branch:.6} ended at {end:.6} (|z(1) - z0| = {miss:e})"
                ));
            }
            Err(e) => failures.push(format!("branch {branch:.6}: {e}")),
        }
    }
    let (g0, run) = accepted.ok_or_else(|| Error::BranchAmbiguity(failures.join("; ")))?;

    let mut nodes = Vec::with_capacity(n + 1);
    let mut values = Vec::with_capacity(n + 1);
    nodes.push(PathNode {
        t: 0.0,
        z: ZERO,
        dz: g0,
    });
    values.push(ZERO);
    nodes.extend(run.nodes.iter().copied());
    values.extend(run.values.iter().copied());
    // the last node is z0 itself up to END_TOL; pin it
    let last = nodes.len() - 1;
    nodes[last].z = z0.z0;
    nodes[last].dz = rhs_prime(1.0) / ctx.unit_derivative(z0.z0)?;
    values[last] = g_z0;

    let scale = g_z0.norm();
    let max_relative_residual = nodes
        .iter()
        .zip(&values)
        .map(|(n, v)| (v - rhs(n.t)).norm() / scale)
        .fold(0.0, f64::max);
    let max_modulus = nodes.iter().map(|n| n.z.norm()).fold(0.0, f64::max);
    let eval = Gamma0Eval {
        ctx: *ctx,
        nodes: nodes.clone(),
        values,
        g_z0,
    };
    let path = PathSpec::with_evaluator(PathKind::Gamma0, nodes, Arc::new(eval))?;
    Ok(Gamma0 {
        path,
        g_at_z0: ctx.params.mu_over_pi() * g_z0,
        g0_at_z0: g0,
        max_relative_residual,
        max_modulus,
    })
}

/// The extremal path `gamma_0` as a [`PathSpec`].
pub fn gamma0_path(ctx: &GContext, z0: EvalPoint, n: usize) -> Result<PathSpec> {
    trace_gamma0(ctx, z0, n).map(|g| g.path)
}

/// `|H'/H - (mu/pi) c - (|mu|/pi) r G'/|G'||` for `a = e^{i theta}`.
pub fn extremal_identity_residual(ctx: &GContext, z: Complex64) -> Result<f64> {
    let params = ctx.params;
    let spec = ExtremalSpec::boundary(params, ctx.theta);
    let lhs = dlog_h(&spec, z)? - params.mu_over_pi() * c_center(z, params.lambda);
    let gp = ctx.derivative(z)?;
    let rhs = gp / gp.norm() * (params.abs_mu_over_pi() * r_radius(z, params.lambda));
    Ok((lhs - rhs).norm())
}

/// Outcome of the tangency check at one boundary angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangencyReport {
    pub theta: f64,
    /// `log H_{e^{i theta},lambda}(z0)`.
    pub boundary_point: Complex64,
    /// The disk of the path bound along the extremal path.
    pub disk: DiskBound,
    /// `boundary_point - disk.center`.
    pub lhs: Complex64,
    /// `G(z0)/|G(z0)| * disk.radius`.
    pub rhs: Complex64,
    /// `|lhs - rhs| / radius`.
    pub relative_residual: f64,
    /// `| |lhs| - radius | / radius`.
    pub modulus_gap: f64,
    /// `|lhs/|lhs| - G(z0)/|G(z0)||`.
    pub direction_error: f64,
    pub g_at_z0: Complex64,
}

pub fn check_tangency(ctx: &GContext, z0: EvalPoint, tol: f64) -> Result<TangencyReport> {
    let gamma = trace_gamma0(ctx, z0, GAMMA0_NODES)?;
    let boundary_point = log_h(&ExtremalSpec::boundary(ctx.params, ctx.theta), z0, tol)?;
    let disk = path_bound(&ctx.params, &gamma.path, tol)?;
    let lhs = boundary_point - disk.center;
    let unit = gamma.g_at_z0 / gamma.g_at_z0.norm();
    let rhs = unit * disk.radius;
    Ok(TangencyReport {
        theta: ctx.theta,
        boundary_point,
        disk,
        lhs,
        rhs,
        relative_residual: (lhs - rhs).norm() / disk.radius,
        modulus_gap: (lhs.norm() - disk.radius).abs() / disk.radius,
        direction_error: (lhs / lhs.norm() - unit).norm(),
        g_at_z0: gamma.g_at_z0,
    })
}
