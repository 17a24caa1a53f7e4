//! Adaptive complex line integration and predictor-corrector continuation.
//!
//! Every integral is reduced to a real parameter on `[0, 1]` and handled by a
//! globally adaptive 21-point Gauss-Kronrod rule (embedded 10-point Gauss
//! estimate, QUADPACK error scaling). The panel with the largest error
//! estimate is bisected until the summed estimate meets the tolerance or
//! [`MAX_PANELS`] is reached.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_PANELS: usize = 1 << 15;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208656251163,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

/// Stopping rule: the summed error estimate must not exceed
/// `max(abs, rel * |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0 }
    }

    pub fn relative(rel: f64) -> Self {
        Self { abs: 0.0, rel }
    }

    fn check(&self) -> Result<()> {
        let ok = self.abs >= 0.0 && self.rel >= 0.0 && (self.abs > 0.0 || self.rel > 0.0);
        if ok && self.abs.is_finite() && self.rel.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidTolerance(self.abs.max(self.rel)))
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<Complex64> {
        let v = f(t)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(t))
        }
    };
    let fc = eval(center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    let mut values = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for (j, x) in XGK[..10].iter().enumerate() {
        let dx = half * x;
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        values[j] = (f1, f2);
        kronrod += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kronrod * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for (j, (f1, f2)) in values.iter().enumerate() {
        resasc += WGK[j] * ((f1 - mean).norm() + (f2 - mean).norm());
    }
    let scale = half.abs();
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut err = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && err < floor {
        err = floor;
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        err,
        resabs,
    })
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks`.
pub(crate) fn adaptive<F>(
    mut f: F,
    breaks: &[f64],
    tol: Tolerance,
    max_panels: usize,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    tol.check()?;
    if breaks.len() < 2 {
        return Ok(QuadratureResult {
            value: Complex64::new(0.0, 0.0),
            err_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut evaluations = 0;
    for w in breaks.windows(2) {
        heap.push(gk21(&mut f, w[0], w[1])?);
        evaluations += 21;
    }
    let mut since_resum = 0;
    let (mut total, mut total_err, mut total_abs) = sums(&heap);
    loop {
        let target = tol.abs.max(tol.rel * total.norm());
        if total_err <= target {
            break;
        }
        // the estimate cannot drop below accumulated rounding
        if total_err <= 100.0 * f64::EPSILON * total_abs {
            break;
        }
        if heap.len() >= max_panels {
            return Err(Error::NoConvergence {
                panels: heap.len(),
                err_estimate: total_err,
                tol: target,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&mut f, worst.a, mid)?;
        let right = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        total_abs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        since_resum += 1;
        if since_resum == 64 {
            (total, total_err, total_abs) = sums(&heap);
            since_resum = 0;
        }
    }
    let (value, err_estimate, _) = sums(&heap);
    Ok(QuadratureResult {
        value,
        err_estimate,
        evaluations,
    })
}

fn sums(heap: &BinaryHeap<Panel>) -> (Complex64, f64, f64) {
    heap.iter()
        .fold((Complex64::new(0.0, 0.0), 0.0, 0.0), |(v, e, a), p| {
            (v + p.value, e + p.err, a + p.resabs)
        })
}

/// Integrates `f` along the straight segment from `start` to `end`,
/// parametrized by arclength fraction `zeta = start + s (end - start)`.
pub fn integrate_line<F>(
    mut f: F,
    start: Complex64,
    end: Complex64,
    tol: Tolerance,
) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let dz = end - start;
    if dz == Complex64::new(0.0, 0.0) {
        tol.check()?;
        return Ok(QuadratureResult {
            value: dz,
            err_estimate: 0.0,
            evaluations: 0,
        });
    }
    adaptive(
        |s| Ok(f(start + dz * s)? * dz),
        &[0.0, 1.0],
        tol,
        MAX_PANELS,
    )
}

/// `int_0^{z_end} f(zeta) d zeta` along the segment `[0, z_end]`, absolute tolerance `tol`.
pub fn integrate_segment<F>(f: F, z_end: Complex64, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    integrate_line(f, Complex64::new(0.0, 0.0), z_end, Tolerance::absolute(tol))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Radial,
    Gamma0,
    Custom,
}

/// A sample `(t, z(t), z'(t))` of a C1 path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathNode {
    pub t: f64,
    pub z: Complex64,
    pub dz: Complex64,
}

/// Exact evaluation of a path between its nodes.
pub trait PathEval: Send + Sync {
    /// `(z(t), z'(t))` for `t` in `[0, 1]`.
    fn point(&self, t: f64) -> Result<(Complex64, Complex64)>;
}

/// A discretized C1 curve in the unit disk with `t` running over `[0, 1]`.
///
/// Between nodes the curve is evaluated through its [`PathEval`] when one is
/// attached, and by cubic Hermite interpolation of the node data otherwise.
#[derive(Clone)]
pub struct PathSpec {
    pub kind: PathKind,
    pub nodes: Vec<PathNode>,
    evaluator: Option<Arc<dyn PathEval>>,
}

impl fmt::Debug for PathSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PathSpec")
            .field("kind", &self.kind)
            .field("nodes", &self.nodes.len())
            .field("exact", &self.evaluator.is_some())
            .finish()
    }
}

struct Radial {
    end: Complex64,
}

impl PathEval for Radial {
    fn point(&self, t: f64) -> Result<(Complex64, Complex64)> {
        Ok((self.end * t, self.end))
    }
}

impl PathSpec {
    /// Builds a path from node samples, checking the node invariants.
    pub fn from_nodes(kind: PathKind, nodes: Vec<PathNode>) -> Result<Self> {
        Self::validate(&nodes)?;
        Ok(Self {
            kind,
            nodes,
            evaluator: None,
        })
    }

    pub(crate) fn with_evaluator(
        kind: PathKind,
        nodes: Vec<PathNode>,
        evaluator: Arc<dyn PathEval>,
    ) -> Result<Self> {
        Self::validate(&nodes)?;
        Ok(Self {
            kind,
            nodes,
            evaluator: Some(evaluator),
        })
    }

    /// The segment `z(t) = t z_end` sampled at `n` uniform nodes.
    pub fn radial(z_end: Complex64, n: usize) -> Result<Self> {
        if !(z_end.norm() < 1.0) {
            return Err(Error::InvalidPath(format!(
                "radial end point {z_end} is outside the disk"
            )));
        }
        let n = n.max(2);
        let nodes = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                PathNode {
                    t,
                    z: z_end * t,
                    dz: z_end,
                }
            })
            .collect();
        Self::with_evaluator(PathKind::Radial, nodes, Arc::new(Radial { end: z_end }))
    }

    pub fn is_exact(&self) -> bool {
        self.evaluator.is_some()
    }

    pub fn end(&self) -> Complex64 {
        self.nodes.last().map(|n| n.z).unwrap_or_default()
    }

    fn validate(nodes: &[PathNode]) -> Result<()> {
        if nodes.len() < 2 {
            return Err(Error::InvalidPath("at least two nodes are required".into()));
        }
        if nodes[0].t != 0.0 || nodes[nodes.len() - 1].t != 1.0 {
            return Err(Error::InvalidPath("t must run from 0 to 1".into()));
        }
        for w in nodes.windows(2) {
            if !(w[1].t > w[0].t) {
                return Err(Error::InvalidPath(format!(
                    "t not strictly increasing at {}",
                    w[1].t
                )));
            }
        }
        for n in nodes {
            let finite = [n.z.re, n.z.im, n.dz.re, n.dz.im]
                .iter()
                .all(|x| x.is_finite());
            if !finite || !(n.z.norm() < 1.0) {
                return Err(Error::InvalidPath(format!(
                    "node at t = {} is not a finite point of the disk",
                    n.t
                )));
            }
        }
        Ok(())
    }

    /// `(z(t), z'(t))`.
    pub fn point(&self, t: f64) -> Result<(Complex64, Complex64)> {
        match &self.evaluator {
            Some(e) => e.point(t),
            None => Ok(hermite(&self.nodes, t)),
        }
    }

    pub(crate) fn breakpoints(&self) -> Vec<f64> {
        self.nodes.iter().map(|n| n.t).collect()
    }
}

/// Index `k` with `nodes[k].t <= t <= nodes[k + 1].t`.
pub(crate) fn panel_index(nodes: &[PathNode], t: f64) -> usize {
    let k = nodes.partition_point(|n| n.t <= t);
    k.saturating_sub(1).min(nodes.len() - 2)
}

/// Cubic Hermite interpolation of position and derivative.
pub(crate) fn hermite(nodes: &[PathNode], t: f64) -> (Complex64, Complex64) {
    let k = panel_index(nodes, t);
    let (p, q) = (&nodes[k], &nodes[k + 1]);
    let h = q.t - p.t;
    let s = (t - p.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    let z = p.z * h00 + p.dz * (h10 * h) + q.z * h01 + q.dz * (h11 * h);
    let d00 = (6.0 * s2 - 6.0 * s) / h;
    let d10 = 3.0 * s2 - 4.0 * s + 1.0;
    let d01 = (-6.0 * s2 + 6.0 * s) / h;
    let d11 = 3.0 * s2 - 2.0 * s;
    let dz = p.z * d00 + p.dz * d10 + q.z * d01 + q.dz * d11;
    (z, dz)
}

/// How the path differential enters the integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathMode {
    /// `int f(z(t)) z'(t) dt`
    Value,
    /// `int f(z(t)) |z'(t)| dt`
    Modulus,
}

/// Integrates `f` along `path`, one initial panel per pair of adjacent nodes.
pub fn integrate_path<F>(
    mut f: F,
    path: &PathSpec,
    mode: PathMode,
    tol: f64,
) -> Result<QuadratureResult>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let breaks = path.breakpoints();
    adaptive(
        |t| {
            let (z, dz) = path.point(t)?;
            let weight = match mode {
                PathMode::Value => dz,
                PathMode::Modulus => Complex64::new(dz.norm(), 0.0),
            };
            Ok(f(z)? * weight)
        },
        &breaks,
        Tolerance::absolute(tol),
        MAX_PANELS,
    )
}

/// Analytic map tracked by [`newton_continue`].
pub trait ContinuationTarget {
    fn value(&self, z: Complex64) -> Result<Complex64>;
    fn derivative(&self, z: Complex64) -> Result<Complex64>;
}

impl<V, D> ContinuationTarget for (V, D)
where
    V: Fn(Complex64) -> Result<Complex64>,
    D: Fn(Complex64) -> Result<Complex64>,
{
    fn value(&self, z: Complex64) -> Result<Complex64> {
        (self.0)(z)
    }
    fn derivative(&self, z: Complex64) -> Result<Complex64> {
        (self.1)(z)
    }
}

pub const NEWTON_MAX_ITER: usize = 25;
const MAX_SUBDIVISION_DEPTH: u32 = 16;

/// Result of a continuation run: the traced nodes and the target value at each.
#[derive(Debug, Clone)]
pub struct ContinuationRun {
    pub nodes: Vec<PathNode>,
    pub values: Vec<Complex64>,
}

struct Tracker<'a, T: ?Sized> {
    target: &'a T,
    rhs: &'a dyn Fn(f64) -> Complex64,
    rhs_prime: &'a dyn Fn(f64) -> Complex64,
    accept: f64,
}

impl<T: ContinuationTarget + ?Sized> Tracker<'_, T> {
    fn velocity(&self, t: f64, z: Complex64) -> Result<Complex64> {
        Ok((self.rhs_prime)(t) / self.target.derivative(z)?)
    }

    fn correct(&self, t: f64, mut z: Complex64) -> Result<(Complex64, Complex64)> {
        let goal = (self.rhs)(t);
        let mut residual = f64::INFINITY;
        let mut value = Complex64::new(0.0, 0.0);
        for _ in 0..NEWTON_MAX_ITER {
            if !(z.norm() < 1.0) {
                return Err(Error::LeftDisk {
                    t,
                    modulus: z.norm(),
                });
            }
            value = self.target.value(z)?;
            let r = value - goal;
            residual = r.norm();
            if residual == 0.0 {
                return Ok((z, value));
            }
            let step = r / self.target.derivative(z)?;
            z -= step;
            if step.norm() <= 1e-14 * z.norm() + f64::MIN_POSITIVE {
                break;
            }
        }
        if !(z.norm() < 1.0) {
            return Err(Error::LeftDisk {
                t,
                modulus: z.norm(),
            });
        }
        // re-evaluate at the final iterate
        let fresh = self.target.value(z)?;
        let fresh_res = (fresh - goal).norm();
        if fresh_res <= self.accept {
            Ok((z, fresh))
        } else if residual <= self.accept {
            Ok((z, value))
        } else {
            Err(Error::ContinuationStall { t })
        }
    }

    fn advance(
        &self,
        t0: f64,
        z0: Complex64,
        t1: f64,
        depth: u32,
    ) -> Result<(Complex64, Complex64)> {
        let attempt = || -> Result<(Complex64, Complex64)> {
            let h = t1 - t0;
            let k1 = self.velocity(t0, z0)?;
            let k2 = self.velocity(t0 + 0.5 * h, z0 + k1 * (0.5 * h))?;
            let k3 = self.velocity(t0 + 0.5 * h, z0 + k2 * (0.5 * h))?;
            let k4 = self.velocity(t1, z0 + k3 * h)?;
            let predicted = z0 + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            self.correct(t1, predicted)
        };
        match attempt() {
            Ok(r) => Ok(r),
            Err(e) if depth >= MAX_SUBDIVISION_DEPTH || !e.is_numerical() => Err(e),
            Err(_) => {
                let mid = 0.5 * (t0 + t1);
                let (zm, _) = self.advance(t0, z0, mid, depth + 1)?;
                self.advance(mid, zm, t1, depth + 1)
            }
        }
    }
}

/// Tracks `z(t)` with `target(z(t)) = rhs(t)` over `t_grid`.
///
/// The predictor integrates `target'(z) z' = rhs'(t)` with one RK4 step per
/// grid interval; the Newton corrector then enforces
/// `|target(z) - rhs(t)| <= 1e-10 max(1, |rhs(1)|)`. Failing steps are
/// bisected before a [`Error::ContinuationStall`] is reported.
pub fn newton_continue<T>(
    target: &T,
    rhs: &dyn Fn(f64) -> Complex64,
    rhs_prime: &dyn Fn(f64) -> Complex64,
    start: Complex64,
    t_grid: &[f64],
) -> Result<ContinuationRun>
where
    T: ContinuationTarget + ?Sized,
{
    if t_grid.is_empty() {
        return Err(Error::InvalidPath("empty t grid".into()));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidPath(
            "t grid must be strictly increasing".into(),
        ));
    }
    let tracker = Tracker {
        target,
        rhs,
        rhs_prime,
        accept: 1e-10 * rhs(1.0).norm().max(1.0),
    };
    let (mut z, mut value) = tracker.correct(t_grid[0], start)?;
    let mut nodes = Vec::with_capacity(t_grid.len());
    let mut values = Vec::with_capacity(t_grid.len());
    let node = |t: f64, z: Complex64| -> Result<PathNode> {
        Ok(PathNode {
            t,
            z,
            dz: tracker.velocity(t, z)?,
        })
    };
    nodes.push(node(t_grid[0], z)?);
    values.push(value);
    for w in t_grid.windows(2) {
        (z, value) = tracker.advance(w[0], z, w[1], 0)?;
        nodes.push(node(w[1], z)?);
        values.push(value);
    }
    Ok(ContinuationRun { nodes, values })
}
