//! Boundary tracing of the variability region and the polygon predicates
//! used to check it (convexity, simplicity, containment).

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extremal::{boundary_velocity, degenerate_value, log_h_detailed, ExtremalSpec};
use crate::params::{ClassParams, EvalPoint};
use crate::{Error, Result};

pub const MIN_SAMPLES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub theta: f64,
    pub w: Complex64,
    /// `dw/dtheta`; zero for singleton regions.
    pub tangent: Complex64,
}

/// Samples of the boundary curve `theta -> log H_{e^{i theta},lambda}(z0)`,
/// or the single point of a degenerate region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub params: ClassParams,
    pub z0: EvalPoint,
    pub samples: Vec<BoundarySample>,
    pub tol: f64,
    /// Largest quadrature error estimate over the samples, after the prefactor.
    pub err_bound: f64,
    pub singleton: bool,
}

impl BoundaryCurve {
    pub fn polygon(&self) -> RegionPolygon {
        RegionPolygon {
            vertices: self.samples.iter().map(|s| s.w).collect(),
            tangents: self.samples.iter().map(|s| s.tangent).collect(),
        }
    }
}

/// `n` uniform angles in `(-pi, pi]`, ending at `pi`.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -PI + 2.0 * PI * (i + 1) as f64 / n as f64)
        .collect()
}

/// True when the region reduces to the single degenerate value.
pub fn is_singleton(params: &ClassParams, z0: EvalPoint) -> bool {
    params.lambda_is_unimodular() || z0.is_origin()
}

/// How boundary angles are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaSampling {
    /// `theta_i = -pi + 2 pi (i + 1) / n`.
    Uniform,
    /// Angles equidistributing a mix of arclength, turning and angle,
    /// measured on a uniform pilot curve of [`pilot_size`] samples.
    #[default]
    Equidistributed,
}

/// Pilot resolution used by [`ThetaSampling::Equidistributed`].
pub fn pilot_size(n: usize) -> usize {
    (16 * n).max(4096)
}

const ARCLENGTH_WEIGHT: f64 = 0.45;
const TURNING_WEIGHT: f64 = 0.45;
const ANGLE_WEIGHT: f64 = 0.1;

/// Traces the boundary with [`ThetaSampling::Equidistributed`] angles.
pub fn boundary_curve(
    params: ClassParams,
    z0: EvalPoint,
    n: usize,
    tol: f64,
) -> Result<BoundaryCurve> {
    boundary_curve_with(params, z0, n, tol, ThetaSampling::default())
}

pub fn boundary_curve_with(
    params: ClassParams,
    z0: EvalPoint,
    n: usize,
    tol: f64,
    sampling: ThetaSampling,
) -> Result<BoundaryCurve> {
    if is_singleton(&params, z0) {
        return Ok(BoundaryCurve {
            params,
            z0,
            samples: vec![BoundarySample {
                theta: 0.0,
                w: degenerate_value(&params, z0),
                tangent: Complex64::new(0.0, 0.0),
            }],
            tol,
            err_bound: 0.0,
            singleton: true,
        });
    }
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples(n));
    }
    let thetas = match sampling {
        ThetaSampling::Uniform => theta_grid(n),
        ThetaSampling::Equidistributed => {
            let pilot = theta_grid(pilot_size(n));
            let points = pilot
                .par_iter()
                .map(|&theta| {
                    Ok(log_h_detailed(&ExtremalSpec::boundary(params, theta), z0, tol)?.value)
                })
                .collect::<Result<Vec<_>>>()?;
            equidistribute(&points, n)
        }
    };
    let traced: Vec<(BoundarySample, f64)> = thetas
        .into_par_iter()
        .map(|theta| {
            let r = log_h_detailed(&ExtremalSpec::boundary(params, theta), z0, tol)?;
            let tangent = boundary_velocity(params, theta, z0, tol)?;
            Ok((
                BoundarySample {
                    theta,
                    w: r.value,
                    tangent,
                },
                r.err_estimate,
            ))
        })
        .collect::<Result<_>>()?;
    let err_bound = traced.iter().map(|t| t.1).fold(0.0, f64::max);
    Ok(BoundaryCurve {
        params,
        z0,
        samples: traced.into_iter().map(|t| t.0).collect(),
        tol,
        err_bound,
        singleton: false,
    })
}

/// Picks `n` angles from a closed pilot curve sampled on [`theta_grid`], so
/// that each new arc carries an equal share of the monitor
/// `a * length / L + b * turning / total_turning + c * dtheta / 2 pi`.
fn equidistribute(points: &[Complex64], n: usize) -> Vec<f64> {
    let m = points.len();
    // pilot vertex j sits at thetas[j]; chord j joins vertex j to j + 1 (cyclic)
    let chords: Vec<Complex64> = (0..m).map(|j| points[(j + 1) % m] - points[j]).collect();
    let lengths: Vec<f64> = chords.iter().map(|c| c.norm()).collect();
    let turn_at = |j: usize| -> f64 {
        let prev = chords[(j + m - 1) % m];
        let next = chords[j];
        if prev.norm() == 0.0 || next.norm() == 0.0 {
            0.0
        } else {
            (next / prev).arg().abs()
        }
    };
    let turning: Vec<f64> = (0..m)
        .map(|j| 0.5 * (turn_at(j) + turn_at((j + 1) % m)))
        .collect();
    let total_len: f64 = lengths.iter().sum();
    let total_turn: f64 = turning.iter().sum();
    let cost: Vec<f64> = (0..m)
        .map(|j| {
            let mut c = ANGLE_WEIGHT / m as f64;
            if total_len > 0.0 {
                c += ARCLENGTH_WEIGHT * lengths[j] / total_len;
            }
            if total_turn > 0.0 {
                c += TURNING_WEIGHT * turning[j] / total_turn;
            }
            c
        })
        .collect();
    let total: f64 = cost.iter().sum();
    let step = 2.0 * PI / m as f64;
    // walk the arcs in angle order starting at -pi: the chord ending at
    // vertex 0 (which starts at vertex m - 1, theta = pi = -pi) comes first
    let arc = |k: usize| cost[(k + m - 1) % m];
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut k = 0;
    for i in 0..n {
        if i == n - 1 {
            out.push(PI);
            break;
        }
        let level = total * (i + 1) as f64 / n as f64;
        while k < m - 1 && acc + arc(k) < level {
            acc += arc(k);
            k += 1;
        }
        let frac = ((level - acc) / arc(k)).clamp(0.0, 1.0);
        out.push(-PI + (k as f64 + frac) * step);
    }
    out
}

/// Closed polygon through the boundary samples, treated cyclically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionPolygon {
    pub vertices: Vec<Complex64>,
    /// Curve tangents at the vertices, when known; each one defines a
    /// supporting line of the convex region.
    #[serde(default)]
    pub tangents: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub convex: bool,
    /// Largest wrong-sign turn, normalized by the squared diameter.
    pub worst_violation: f64,
    /// Vertex `i` of the offending triple `(i, i+1, i+2)`.
    pub worst_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Containment {
    Inside,
    Boundary,
    Outside,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

impl RegionPolygon {
    pub fn new(vertices: Vec<Complex64>) -> Self {
        Self {
            vertices,
            tangents: Vec::new(),
        }
    }

    fn require(&self) -> Result<usize> {
        let n = self.vertices.len();
        if n < 3 {
            Err(Error::TooFewVertices(n))
        } else {
            Ok(n)
        }
    }

    fn edge(&self, i: usize) -> (Complex64, Complex64) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    /// Twice the signed area; positive for counter-clockwise order.
    pub fn signed_area2(&self) -> f64 {
        (0..self.vertices.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                cross(a, b)
            })
            .sum()
    }

    pub fn area(&self) -> f64 {
        0.5 * self.signed_area2().abs()
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Area centroid; falls back to the vertex mean for degenerate polygons.
    pub fn centroid(&self) -> Complex64 {
        let n = self.vertices.len();
        let mean = self.vertices.iter().sum::<Complex64>() / n.max(1) as f64;
        let a2 = self.signed_area2();
        if n < 3 || a2 == 0.0 {
            return mean;
        }
        // shift to the mean to limit cancellation
        let mut acc = Complex64::new(0.0, 0.0);
        let mut a2s = 0.0;
        for i in 0..n {
            let (p, q) = self.edge(i);
            let (p, q) = (p - mean, q - mean);
            let k = cross(p, q);
            acc += (p + q) * k;
            a2s += k;
        }
        mean + acc / (3.0 * a2s)
    }

    /// Smallest distance between two distinct vertices.
    pub fn min_vertex_separation(&self) -> f64 {
        let v = &self.vertices;
        let mut d = f64::INFINITY;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.min((v[i] - v[j]).norm());
            }
        }
        d
    }

    /// Signed distance from `w` to the nearest edge line, positive inside.
    pub fn signed_margin(&self, w: Complex64) -> Result<f64> {
        let n = self.require()?;
        let orient = self.signed_area2().signum();
        let mut margin = f64::INFINITY;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let e = b - a;
            let len = e.norm();
            if len == 0.0 {
                continue;
            }
            margin = margin.min(orient * cross(e, w - a) / len);
        }
        Ok(margin)
    }

    /// Signed distance from `w` to the nearest supporting line through a
    /// vertex, positive on the region side. `None` without tangents.
    pub fn supporting_margin(&self, w: Complex64) -> Result<Option<f64>> {
        let n = self.require()?;
        if self.tangents.len() != n {
            return Ok(None);
        }
        let orient = self.signed_area2().signum();
        let mut margin = f64::INFINITY;
        for (v, t) in self.vertices.iter().zip(&self.tangents) {
            let len = t.norm();
            if len == 0.0 {
                continue;
            }
            // outward normal is the tangent turned clockwise for counter-clockwise curves
            let normal = Complex64::new(0.0, -orient) * t / len;
            margin = margin.min((normal.conj() * (v - w)).re);
        }
        Ok(Some(margin))
    }

    /// Distance from `w` to the polygon boundary.
    pub fn boundary_distance(&self, w: Complex64) -> f64 {
        (0..self.vertices.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                segment_distance(w, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let e = b - a;
    let len2 = e.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let s = ((p - a).re * e.re + (p - a).im * e.im) / len2;
    (p - (a + e * s.clamp(0.0, 1.0))).norm()
}

/// All cyclic turns must share one sign; opposite-sign turns up to
/// `tol * D^2` are tolerated.
pub fn is_convex(poly: &RegionPolygon, tol: f64) -> Result<ConvexityReport> {
    let n = poly.require()?;
    let d = poly.diameter();
    let orient = poly.signed_area2().signum();
    let mut worst = 0.0;
    let mut worst_index = None;
    for i in 0..n {
        let a = poly.vertices[i];
        let b = poly.vertices[(i + 1) % n];
        let c = poly.vertices[(i + 2) % n];
        let turn = orient * cross(b - a, c - b);
        if turn < 0.0 {
            let v = if d > 0.0 {
                -turn / (d * d)
            } else {
                f64::INFINITY
            };
            if v > worst {
                worst = v;
                worst_index = Some(i);
            }
        }
    }
    Ok(ConvexityReport {
        convex: orient != 0.0 && worst <= tol,
        worst_violation: worst,
        worst_index,
    })
}

fn orientation(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    cross(b - a, c - a)
}

fn on_segment(a: Complex64, b: Complex64, p: Complex64) -> bool {
    p.re >= a.re.min(b.re)
        && p.re <= a.re.max(b.re)
        && p.im >= a.im.min(b.im)
        && p.im <= a.im.max(b.im)
}

pub(crate) fn segments_intersect(
    p1: Complex64,
    p2: Complex64,
    q1: Complex64,
    q2: Complex64,
) -> bool {
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// Pairwise test of all non-adjacent edges.
pub fn is_simple(poly: &RegionPolygon) -> Result<bool> {
    let n = poly.require()?;
    for i in 0..n {
        let (a, b) = poly.edge(i);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = poly.edge(j);
            if segments_intersect(a, b, c, d) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Classifies `w` by its signed distance to the edge half-planes, with a
/// boundary band of `tol * D`.
///
/// The polygon is inscribed in the convex region it samples. When vertex
/// tangents are present, a point is only reported outside if it also
/// violates a supporting line by more than the band, so points between a
/// chord and the true curve come out as boundary rather than outside.
pub fn contains(poly: &RegionPolygon, w: Complex64, tol: f64) -> Result<Containment> {
    let report = is_convex(poly, CONVEXITY_TOL)?;
    if !report.convex {
        return Err(Error::NonConvexInput(report.worst_violation));
    }
    let band = tol * poly.diameter();
    let inner = poly.signed_margin(w)?;
    let outer = poly.supporting_margin(w)?.unwrap_or(inner);
    Ok(if inner > band {
        Containment::Inside
    } else if outer >= -band {
        Containment::Boundary
    } else {
        Containment::Outside
    })
}

/// Convexity tolerance used when a predicate needs a convex polygon.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Symmetric Hausdorff distance between the two closed polylines, measured
/// from the vertices and edge midpoints of each to the other.
pub fn hausdorff_distance(a: &RegionPolygon, b: &RegionPolygon) -> f64 {
    fn one_sided(from: &RegionPolygon, to: &RegionPolygon) -> f64 {
        let n = from.vertices.len();
        (0..n)
            .flat_map(|i| {
                let (p, q) = from.edge(i);
                [p, (p + q) * 0.5]
            })
            .map(|p| to.boundary_distance(p))
            .fold(0.0, f64::max)
    }
    one_sided(a, b).max(one_sided(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> RegionPolygon {
        RegionPolygon::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0), c(0.0, 1.0)])
    }

    #[test]
    fn square_predicates() {
        let sq = square();
        assert!(is_convex(&sq, 1e-9).unwrap().convex);
        assert!(is_simple(&sq).unwrap());
        assert_eq!(
            contains(&sq, sq.centroid(), 1e-6).unwrap(),
            Containment::Inside
        );
        assert_eq!(
            contains(&sq, c(3.0, 3.0), 1e-6).unwrap(),
            Containment::Outside
        );
        assert_eq!(
            contains(&sq, c(1.0, 0.5), 1e-6).unwrap(),
            Containment::Boundary
        );
        assert!((sq.centroid() - c(0.5, 0.5)).norm() < 1e-15);
        assert!((sq.diameter() - 2f64.sqrt()).abs() < 1e-15);
        // clockwise order gives the same verdicts
        let mut cw = sq.clone();
        cw.vertices.reverse();
        assert!(is_convex(&cw, 1e-9).unwrap().convex);
        assert_eq!(
            contains(&cw, c(0.5, 0.5), 1e-6).unwrap(),
            Containment::Inside
        );
    }

    #[test]
    fn reflected_vertex_is_not_convex() {
        let dented = RegionPolygon::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.3), c(0.0, 1.0)]);
        let r = is_convex(&dented, 1e-9).unwrap();
        assert!(!r.convex);
        assert!(r.worst_index.is_some());
        assert!(matches!(
            contains(&dented, c(0.1, 0.1), 1e-6),
            Err(Error::NonConvexInput(_))
        ));
        assert!(is_simple(&dented).unwrap());
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let bowtie = RegionPolygon::new(vec![c(0.0, 0.0), c(1.0, 1.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(!is_simple(&bowtie).unwrap());
    }

    #[test]
    fn too_few_vertices() {
        let seg = RegionPolygon::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            is_convex(&seg, 1e-9),
            Err(Error::TooFewVertices(2))
        ));
        assert!(matches!(is_simple(&seg), Err(Error::TooFewVertices(2))));
        assert!(matches!(
            contains(&seg, c(0.0, 0.0), 1e-9),
            Err(Error::TooFewVertices(2))
        ));
    }

    #[test]
    fn hausdorff_of_nested_polygons() {
        let sq = square();
        let shifted = RegionPolygon::new(sq.vertices.iter().map(|v| v + c(0.1, 0.0)).collect());
        assert!((hausdorff_distance(&sq, &shifted) - 0.1).abs() < 1e-12);
        assert_eq!(hausdorff_distance(&sq, &sq), 0.0);
    }

    #[test]
    fn theta_grid_ends_at_pi() {
        let g = theta_grid(8);
        assert_eq!(g.len(), 8);
        assert_eq!(*g.last().unwrap(), PI);
        assert!(g[0] > -PI);
        let coarse = theta_grid(256);
        let fine = theta_grid(512);
        for (i, t) in coarse.iter().enumerate() {
            assert!((fine[2 * i + 1] - t).abs() < 1e-14);
        }
    }

    #[test]
    fn singleton_regions() {
        let p = ClassParams::new(c(3.0, 1.0), Complex64::from_polar(1.0, 0.7));
        let z0 = EvalPoint::new(c(0.3, 0.2));
        let curve = boundary_curve(p, z0, 512, 1e-10).unwrap();
        assert!(curve.singleton);
        assert_eq!(curve.samples.len(), 1);
        assert_eq!(curve.samples[0].w, degenerate_value(&p, z0));

        let p = ClassParams::new(c(3.0, 1.0), c(0.2, 0.1));
        let curve = boundary_curve(p, EvalPoint::new(c(0.0, 0.0)), 512, 1e-10).unwrap();
        assert!(curve.singleton);
        assert_eq!(curve.samples[0].w, c(0.0, 0.0));
    }

    #[test]
    fn small_curve_is_convex_and_deterministic() {
        let p = ClassParams::new(c(PI, 0.0), c(0.0, 0.0));
        let z0 = EvalPoint::new(c(0.5, 0.0));
        let a = boundary_curve(p, z0, 64, 1e-10).unwrap();
        let b = boundary_curve(p, z0, 64, 1e-10).unwrap();
        assert_eq!(a, b);
        let poly = a.polygon();
        assert!(is_convex(&poly, 1e-9).unwrap().convex);
        assert!(is_simple(&poly).unwrap());
        assert_eq!(
            contains(&poly, degenerate_value(&p, z0), 1e-6).unwrap(),
            Containment::Inside
        );
        assert!(matches!(
            boundary_curve(p, z0, 8, 1e-10),
            Err(Error::TooFewSamples(8))
        ));
    }

    #[test]
    fn equidistributed_angles_are_increasing_and_end_at_pi() {
        // a closed curve that is fast near theta = 0 and slow elsewhere
        let m = 4096;
        let pts: Vec<Complex64> = theta_grid(m)
            .iter()
            .map(|&t| {
                let s = t + 1.5 * (t).sin();
                Complex64::from_polar(1.0, s)
            })
            .collect();
        let th = equidistribute(&pts, 64);
        assert_eq!(th.len(), 64);
        assert_eq!(*th.last().unwrap(), PI);
        assert!(th.windows(2).all(|w| w[1] > w[0]));
        assert!(th[0] > -PI);
        // more angles land near 0, where the curve moves fastest
        let near = th.iter().filter(|t| t.abs() < 0.5).count();
        assert!(near > 64 / 6, "{near}");
    }

    #[test]
    fn chord_gap_points_are_boundary_not_outside() {
        let p = ClassParams::new(c(40.0, 25.0), c(0.3, -0.2));
        let z0 = EvalPoint::new(c(0.2, 0.9));
        let curve = boundary_curve_with(p, z0, 32, 1e-10, ThetaSampling::Uniform).unwrap();
        let poly = curve.polygon();
        let mut seen_gap = false;
        for s in &curve.samples {
            let mid = s.theta - PI / 32.0;
            let w = crate::extremal::log_h(&ExtremalSpec::boundary(p, mid), z0, 1e-10).unwrap();
            if poly.signed_margin(w).unwrap() < -1e-6 * poly.diameter() {
                seen_gap = true;
            }
            assert_ne!(contains(&poly, w, 1e-6).unwrap(), Containment::Outside);
        }
        assert!(seen_gap);
        let far = poly.centroid() + 2.0 * poly.diameter();
        assert_eq!(contains(&poly, far, 1e-6).unwrap(), Containment::Outside);
    }
}
