use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate denominator: |{what}| = {magnitude:e}")]
    DegenerateDenominator { what: &'static str, magnitude: f64 },

    #[error("invalid mu = {re}{im:+}i: real part must be positive")]
    InvalidMu { re: f64, im: f64 },

    #[error("invalid lambda = {re}{im:+}i: modulus must not exceed 1")]
    InvalidLambda { re: f64, im: f64 },

    #[error("invalid evaluation point z0 = {re}{im:+}i: must lie in the open unit disk")]
    InvalidEvalPoint { re: f64, im: f64 },

    #[error("invalid tolerance {0:e}")]
    InvalidTolerance(f64),

    #[error("quadrature did not converge after {panels} panels (error estimate {err_estimate:e}, requested {tol:e})")]
    NoConvergence {
        panels: usize,
        err_estimate: f64,
        tol: f64,
    },

    #[error("non-finite integrand value at t = {0}")]
    NonFinite(f64),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("continuation stalled at t = {t}: Newton corrector did not converge")]
    ContinuationStall { t: f64 },

    #[error("continuation left the unit disk at t = {t} (|z| = {modulus})")]
    LeftDisk { t: f64, modulus: f64 },

    #[error("neither square-root branch of the extremal path reached z0 ({0})")]
    BranchAmbiguity(String),

    #[error("a boundary curve needs at least 16 samples, got {0}")]
    TooFewSamples(usize),

    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("polygon is not convex (worst normalized violation {0:e})")]
    NonConvexInput(f64),

    #[error("generator zero {re}{im:+}i lies outside the open unit disk")]
    InvalidGenerator { re: f64, im: f64 },

    #[error("max_degree {0} exceeds the supported limit of 8")]
    DegreeTooLarge(usize),
}

impl Error {
    /// True for failures of the numerical engine (quadrature or continuation),
    /// as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::NonFinite(_)
                | Error::ContinuationStall { .. }
                | Error::LeftDisk { .. }
                | Error::BranchAmbiguity(_)
                | Error::DegenerateDenominator { .. }
        )
    }
}
