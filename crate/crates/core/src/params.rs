//! Class parameters `(mu, lambda)` and the evaluation point `z0`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// `|lambda|` above this is reported as near-degenerate.
pub const NEAR_UNIMODULAR_LAMBDA: f64 = 1.0 - 1e-9;
/// `|z0|` above this is reported as near the boundary.
pub const NEAR_BOUNDARY_Z0: f64 = 0.999;
/// `| |lambda| - 1 |` at or below this is treated as `|lambda| = 1`.
pub const UNIMODULAR_EPS: f64 = 1e-12;

/// The pair `(mu, lambda)` selecting the normalized class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub mu: Complex64,
    pub lambda: Complex64,
}

impl ClassParams {
    pub fn new(mu: Complex64, lambda: Complex64) -> Self {
        Self { mu, lambda }
    }

    /// `mu / pi`, the prefactor in front of every logarithmic integral.
    pub fn mu_over_pi(&self) -> Complex64 {
        self.mu / PI
    }

    /// `|mu| / pi`, the prefactor in front of every radius.
    pub fn abs_mu_over_pi(&self) -> f64 {
        self.mu.norm() / PI
    }

    /// True when `|lambda| = 1` up to [`UNIMODULAR_EPS`].
    pub fn lambda_is_unimodular(&self) -> bool {
        (self.lambda.norm() - 1.0).abs() <= UNIMODULAR_EPS
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EvalPoint {
    pub z0: Complex64,
}

impl EvalPoint {
    pub fn new(z0: Complex64) -> Self {
        Self { z0 }
    }

    pub fn is_origin(&self) -> bool {
        self.z0 == Complex64::new(0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Warning {
    NearUnimodularLambda,
    NearBoundaryEvalPoint,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearUnimodularLambda => write!(f, "|lambda| is within 1e-9 of 1"),
            Warning::NearBoundaryEvalPoint => write!(f, "|z0| exceeds 0.999"),
        }
    }
}

/// Parameters that passed [`validate_params`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Validated {
    pub params: ClassParams,
    pub z0: EvalPoint,
    pub warnings: Vec<Warning>,
}

pub fn validate_params(params: ClassParams, z0: EvalPoint) -> Result<Validated> {
    let ClassParams { mu, lambda } = params;
    if !(mu.re > 0.0) || !mu.im.is_finite() || !mu.re.is_finite() {
        return Err(Error::InvalidMu {
            re: mu.re,
            im: mu.im,
        });
    }
    if !lambda.re.is_finite() || !lambda.im.is_finite() || lambda.norm() > 1.0 + UNIMODULAR_EPS {
        return Err(Error::InvalidLambda {
            re: lambda.re,
            im: lambda.im,
        });
    }
    let z = z0.z0;
    if !z.re.is_finite() || !z.im.is_finite() || !(z.norm() < 1.0) {
        return Err(Error::InvalidEvalPoint { re: z.re, im: z.im });
    }
    let mut warnings = Vec::new();
    if lambda.norm() > NEAR_UNIMODULAR_LAMBDA {
        warnings.push(Warning::NearUnimodularLambda);
    }
    if z.norm() > NEAR_BOUNDARY_Z0 {
        warnings.push(Warning::NearBoundaryEvalPoint);
    }
    Ok(Validated {
        params,
        z0,
        warnings,
    })
}
