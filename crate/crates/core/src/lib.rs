//! Regions of variability for `log f(z0)` over the class of non-vanishing
//! analytic functions in the unit disk that are spirallike with respect to
//! the boundary point `1`, normalized by a prescribed second coefficient.
//!
//! The crate traces the extremal boundary curve of the region, evaluates the
//! pointwise and path-integrated disk bounds that confine it, reconstructs
//! the tangency of those disks along the extremal path, and samples genuine
//! class members as an end-to-end containment check.
//!
//! Layout:
//!
//! - [`mobius`] and [`params`]: disk automorphisms and validated parameters.
//! - [`quadrature`]: adaptive Gauss-Kronrod line and path integration plus
//!   predictor-corrector continuation.
//! - [`extremal`]: the extremal family and its logarithm.
//! - [`region`]: boundary tracing and polygon predicates.
//! - [`bounds`]: disk bounds, the auxiliary function `G` and its extremal path.
//! - [`samplers`]: Blaschke-generated members of the class.
//! - [`presets`], [`verify`], [`cli`]: figure fixtures, the invariant suite and
//!   the command-line surface.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod cli;
mod error;
pub mod extremal;
pub mod mobius;
pub mod params;
pub mod presets;
pub mod quadrature;
pub mod region;
pub mod samplers;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::{ClassParams, EvalPoint, Validated};

/// Default absolute quadrature tolerance, applied before the `mu/pi` prefactor.
pub const DEFAULT_TOL: f64 = 1e-10;
