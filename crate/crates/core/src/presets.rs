//! Parameter triples of the twelve reference figures.

use num_complex::Complex64;
use serde::Serialize;

use crate::params::{ClassParams, EvalPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigurePreset {
    pub id: &'static str,
    pub z0: Complex64,
    pub lambda: Complex64,
    pub mu: Complex64,
}

impl FigurePreset {
    pub fn params(&self) -> ClassParams {
        ClassParams::new(self.mu, self.lambda)
    }

    pub fn eval_point(&self) -> EvalPoint {
        EvalPoint::new(self.z0)
    }
}

const fn preset(
    id: &'static str,
    z0: (f64, f64),
    lambda: (f64, f64),
    mu: (f64, f64),
) -> FigurePreset {
    FigurePreset {
        id,
        z0: Complex64::new(z0.0, z0.1),
        lambda: Complex64::new(lambda.0, lambda.1),
        mu: Complex64::new(mu.0, mu.1),
    }
}

pub const PRESETS: [FigurePreset; 12] = [
    preset(
        "1L",
        (-0.173777, 0.0869191),
        (-0.196029, 0.480913),
        (32796.0, 64560.2),
    ),
    preset(
        "1R",
        (-0.713811, -0.0997298),
        (-0.225338, 0.323073),
        (69097.4, 83886.6),
    ),
    preset(
        "2L",
        (-0.734426, 0.61942),
        (-0.0564481, -0.00656122),
        (54025.0, -5108.28),
    ),
    preset(
        "2R",
        (-0.69693, -0.601351),
        (-0.0416728, -0.683999),
        (23944.2, 50613.5),
    ),
    preset(
        "3L",
        (0.0150249, 0.994594),
        (-0.219752, -0.256693),
        (16828.1, -35690.8),
    ),
    preset(
        "3R",
        (0.378332, -0.90135),
        (0.366791, -0.600223),
        (5006.59, -46769.8),
    ),
    preset(
        "4L",
        (0.80351, 0.549035),
        (-0.55886, 0.0419296),
        (83278.8, -90464.3),
    ),
    preset(
        "4R",
        (0.691568, 0.644823),
        (0.126172, 0.137643),
        (47178.4, 83497.8),
    ),
    preset(
        "5L",
        (0.737135, 0.496542),
        (-0.00646307, -0.0167039),
        (14038.5, 9544.66),
    ),
    preset(
        "5R",
        (-0.00588894, -0.00496324),
        (-0.0472837, 0.0970889),
        (25447.1, -2011.7),
    ),
    preset(
        "6L",
        (0.556307, -0.814404),
        (0.226895, -0.384635),
        (13589.3, -25797.8),
    ),
    preset(
        "6R",
        (0.880992, -0.328223),
        (-0.0326596, 0.656304),
        (39935.5, 11412.0),
    ),
];

/// Case-insensitive lookup by figure id (`"1L"` ... `"6R"`).
pub fn find(id: &str) -> Option<&'static FigurePreset> {
    PRESETS.iter().find(|p| p.id.eq_ignore_ascii_case(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    #[test]
    fn presets_are_valid_and_unique() {
        for p in &PRESETS {
            validate_params(p.params(), p.eval_point()).unwrap();
        }
        let mut ids: Vec<_> = PRESETS.iter().map(|p| p.id).collect();
        ids.dedup();
        assert_eq!(ids.len(), 12);
        assert_eq!(find("6l").unwrap().z0, Complex64::new(0.556307, -0.814404));
        assert!(find("7L").is_none());
    }

    #[test]
    fn preset_checksum() {
        // weighted sum pins every printed digit of every triple
        let mut sum = 0.0;
        for (i, p) in PRESETS.iter().enumerate() {
            let w = (i + 1) as f64;
            sum += w * (p.z0.re + 2.0 * p.z0.im + 3.0 * p.lambda.re + 4.0 * p.lambda.im);
            sum += w * (p.mu.re - 0.5 * p.mu.im) * 1e-5;
        }
        assert!((sum - PRESET_CHECKSUM).abs() < 1e-9, "{sum:.12}");
    }

    const PRESET_CHECKSUM: f64 = 48.34797447;
}
