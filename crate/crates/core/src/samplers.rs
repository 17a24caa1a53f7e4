//! Concrete members of the class built from Blaschke-type Schwarz functions.
//!
//! A member is fixed by a self-map `psi` of the disk with `psi(0) = 0`; its
//! `omega_f(z) = z * delta(psi(z), lambda)` then has `omega_f'(0) = lambda`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mobius::{checked_div, mobius_delta};
use crate::params::{ClassParams, EvalPoint};
use crate::quadrature::integrate_segment;
use crate::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest supported degree of a random generator.
pub const MAX_DEGREE: usize = 8;
/// Cap on the modulus of random Blaschke zeros.
pub const MAX_ZERO_MODULUS: f64 = 0.9;

/// `psi(z) = scale * e^{i rotation} * z * prod (z - a_k) / (1 - conj(a_k) z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzGenerator {
    pub zeros: Vec<Complex64>,
    pub rotation: f64,
    /// In `[0, 1]`; `0` gives `psi = 0`.
    pub scale: f64,
}

impl SchwarzGenerator {
    pub fn new(zeros: Vec<Complex64>, rotation: f64, scale: f64) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidGenerator { re: a.re, im: a.im });
        }
        if !(0.0..=1.0).contains(&scale) {
            return Err(Error::InvalidGenerator { re: scale, im: 0.0 });
        }
        Ok(Self {
            zeros,
            rotation,
            scale,
        })
    }

    /// `psi(z) = a z`, `|a| <= 1`.
    pub fn linear(a: Complex64) -> Result<Self> {
        Self::new(Vec::new(), a.arg(), a.norm())
    }

    /// `psi = 0`.
    pub fn vanishing() -> Self {
        Self {
            zeros: Vec::new(),
            rotation: 0.0,
            scale: 0.0,
        }
    }

    pub fn degree(&self) -> usize {
        self.zeros.len() + 1
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut w = Complex64::from_polar(self.scale, self.rotation) * z;
        for &a in &self.zeros {
            w *= checked_div(z - a, ONE - a.conj() * z, "Blaschke factor")?;
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberFunction {
    pub params: ClassParams,
    pub generator: SchwarzGenerator,
}

impl MemberFunction {
    pub fn new(params: ClassParams, generator: SchwarzGenerator) -> Self {
        Self { params, generator }
    }

    /// `delta(psi(z), lambda) = omega_f(z) / z`.
    fn omega_quotient(&self, z: Complex64) -> Result<Complex64> {
        mobius_delta(self.generator.eval(z)?, self.params.lambda)
    }

    pub fn omega(&self, z: Complex64) -> Result<Complex64> {
        Ok(z * self.omega_quotient(z)?)
    }

    /// `(P_f - (1+z)/(1-z)) / (2z)`, written so that the factor `z` cancels.
    fn log_f_integrand(&self, z: Complex64) -> Result<Complex64> {
        let q = self.omega_quotient(z)?;
        let omega = z * q;
        checked_div(q - ONE, (ONE - omega) * (ONE - z), "log f integrand")
    }
}

/// `P_f(z) = (1 + omega_f(z)) / (1 - omega_f(z))`.
pub fn p_f(member: &MemberFunction, z: Complex64) -> Result<Complex64> {
    let w = member.omega(z)?;
    checked_div(ONE + w, ONE - w, "P_f")
}

/// `log f(z0)` for the normalization `f(0) = 1`, by segment quadrature with
/// absolute tolerance `tol` before the `mu/pi` prefactor.
pub fn log_f(member: &MemberFunction, z0: EvalPoint, tol: f64) -> Result<Complex64> {
    let r = integrate_segment(|z| member.log_f_integrand(z), z0.z0, tol)?;
    Ok(member.params.mu_over_pi() * r.value)
}

/// A seeded random member. The generator draws, in order: the number of
/// zeros `k` uniform in `0..max_degree`, then for each zero a modulus
/// `0.9 * sqrt(u)` and an argument uniform in `[-pi, pi)`, then the rotation
/// uniform in `[-pi, pi)`. The RNG is ChaCha8 seeded with `seed`.
pub fn random_member(seed: u64, params: ClassParams, max_degree: usize) -> Result<MemberFunction> {
    if max_degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(max_degree));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(0..max_degree.max(1));
    let zeros = (0..k)
        .map(|_| {
            let r = MAX_ZERO_MODULUS * rng.gen::<f64>().sqrt();
            let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Complex64::from_polar(r, t)
        })
        .collect();
    let rotation = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    Ok(MemberFunction::new(
        params,
        SchwarzGenerator::new(zeros, rotation, 1.0)?,
    ))
}

/// `log f(z0)` for one sampled member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledValue {
    pub index: usize,
    pub seed: u64,
    pub degree: usize,
    pub value: Complex64,
}

/// Members `seed, seed + 1, ..., seed + count - 1`, evaluated in parallel and
/// returned in index order.
pub fn sample_log_f(
    params: ClassParams,
    z0: EvalPoint,
    count: usize,
    seed: u64,
    max_degree: usize,
    tol: f64,
) -> Result<Vec<SampledValue>> {
    if max_degree > MAX_DEGREE {
        return Err(Error::DegreeTooLarge(max_degree));
    }
    (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let m = random_member(s, params, max_degree)?;
            Ok(SampledValue {
                index: i,
                seed: s,
                degree: m.generator.degree(),
                value: log_f(&m, z0, tol)?,
            })
        })
        .collect()
}
