//! Disk automorphisms used throughout the crate.

use num_complex::Complex64;

use crate::{Error, Result};

/// Denominators smaller than this in modulus are rejected.
pub const DEGENERATE_THRESHOLD: f64 = 1e-14;

/// `(z + lambda) / (1 + conj(lambda) z)`, the automorphism sending `0` to `lambda`.
///
/// For `|lambda| = 1` the map collapses to the constant `lambda` wherever it is
/// defined.
pub fn mobius_delta(z: Complex64, lambda: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) + lambda.conj() * z;
    checked_div(z + lambda, den, "1 + conj(lambda) z")
}

/// `(z - conj(lambda)) / (1 - lambda z)`.
pub fn tau(z: Complex64, lambda: Complex64) -> Result<Complex64> {
    let den = Complex64::new(1.0, 0.0) - lambda * z;
    checked_div(z - lambda.conj(), den, "1 - lambda z")
}

pub(crate) fn checked_div(num: Complex64, den: Complex64, what: &'static str) -> Result<Complex64> {
    let magnitude = den.norm();
    if !(magnitude > DEGENERATE_THRESHOLD) {
        return Err(Error::DegenerateDenominator { what, magnitude });
    }
    Ok(num / den)
}
