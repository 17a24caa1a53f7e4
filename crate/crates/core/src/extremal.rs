//! The extremal family `H_{a,lambda}` whose Schwarz function is `z delta(a z, lambda)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mobius::{checked_div, mobius_delta};
use crate::params::{ClassParams, EvalPoint};
use crate::quadrature::{integrate_segment, QuadratureResult};
use crate::Result;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSpec {
    pub params: ClassParams,
    /// `|a| <= 1`; boundary points of the region come from `a = e^{i theta}`.
    pub a: Complex64,
}

impl ExtremalSpec {
    pub fn new(params: ClassParams, a: Complex64) -> Self {
        Self { params, a }
    }

    pub fn boundary(params: ClassParams, theta: f64) -> Self {
        Self::new(params, Complex64::from_polar(1.0, theta))
    }
}

/// `((lambda - 1) + (1 - conj(lambda)) a zeta) / ((1 - zeta)(1 + (conj(lambda) a - lambda) zeta - a zeta^2))`,
/// the integrand of `log H` without the `mu/pi` prefactor.
pub fn h_log_integrand(spec: &ExtremalSpec, zeta: Complex64) -> Result<Complex64> {
    let lam = spec.params.lambda;
    let a = spec.a;
    let num = (lam - ONE) + (ONE - lam.conj()) * a * zeta;
    let quad = ONE + (lam.conj() * a - lam) * zeta - a * zeta * zeta;
    checked_div(
        num,
        (ONE - zeta) * quad,
        "(1 - zeta)(1 + (conj(lambda) a - lambda) zeta - a zeta^2)",
    )
}

/// `d/da` of [`h_log_integrand`].
pub fn h_log_integrand_da(spec: &ExtremalSpec, zeta: Complex64) -> Result<Complex64> {
    let lam = spec.params.lambda;
    let a = spec.a;
    let num = (lam - ONE) + (ONE - lam.conj()) * a * zeta;
    let num_a = (ONE - lam.conj()) * zeta;
    let den = (ONE - zeta) * (ONE + (lam.conj() * a - lam) * zeta - a * zeta * zeta);
    let den_a = (ONE - zeta) * (lam.conj() * zeta - zeta * zeta);
    checked_div(
        num_a * den - num * den_a,
        den * den,
        "squared extremal denominator",
    )
}

/// `d/dtheta log H_{e^{i theta},lambda}(z0)`, the tangent of the boundary curve.
pub fn boundary_velocity(
    params: ClassParams,
    theta: f64,
    z0: EvalPoint,
    tol: f64,
) -> Result<Complex64> {
    let spec = ExtremalSpec::boundary(params, theta);
    let da_dtheta = Complex64::new(0.0, 1.0) * spec.a;
    let r = integrate_segment(|zeta| h_log_integrand_da(&spec, zeta), z0.z0, tol)?;
    Ok(params.mu_over_pi() * r.value * da_dtheta)
}

/// `log H_{a,lambda}(z0)` with its quadrature error bound, both scaled by the prefactor.
pub fn log_h_detailed(spec: &ExtremalSpec, z0: EvalPoint, tol: f64) -> Result<QuadratureResult> {
    let r = integrate_segment(|zeta| h_log_integrand(spec, zeta), z0.z0, tol)?;
    Ok(QuadratureResult {
        value: spec.params.mu_over_pi() * r.value,
        err_estimate: spec.params.abs_mu_over_pi() * r.err_estimate,
        evaluations: r.evaluations,
    })
}

/// `log H_{a,lambda}(z0)` on the branch vanishing at the origin.
pub fn log_h(spec: &ExtremalSpec, z0: EvalPoint, tol: f64) -> Result<Complex64> {
    log_h_detailed(spec, z0, tol).map(|r| r.value)
}

/// `H_{a,lambda}(z0)`.
pub fn h_value(spec: &ExtremalSpec, z0: EvalPoint, tol: f64) -> Result<Complex64> {
    log_h(spec, z0, tol).map(|w| w.exp())
}

/// Closed-form logarithmic derivative `H'/H`.
pub fn dlog_h(spec: &ExtremalSpec, z: Complex64) -> Result<Complex64> {
    Ok(spec.params.mu_over_pi() * h_log_integrand(spec, z)?)
}

/// Schwarz function `omega_H(z) = z delta(a z, lambda)`.
pub fn omega_h(spec: &ExtremalSpec, z: Complex64) -> Result<Complex64> {
    Ok(z * mobius_delta(spec.a * z, spec.params.lambda)?)
}

/// `(mu/pi) (Log(1 - z0) - Log(1 - lambda z0))`: the whole region when
/// `|lambda| = 1` or `z0 = 0`, an interior point otherwise.
pub fn degenerate_value(params: &ClassParams, z0: EvalPoint) -> Complex64 {
    let u = ONE - z0.z0;
    let v = ONE - params.lambda * z0.z0;
    // principal logs agree with the integral only in the right half-plane
    assert!(
        u.re > 0.0 && v.re > 0.0,
        "degenerate_value: branch condition violated"
    );
    params.mu_over_pi() * (u.ln() - v.ln())
}
