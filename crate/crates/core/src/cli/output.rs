//! Text renderings of curves and samples: CSV with round-trip precision and
//! a plain SVG polyline.

use std::fmt::Write;

use num_complex::Complex64;

use super::SampleRow;
use crate::region::{BoundaryCurve, Containment};

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// `theta,re,im`, one row per sample.
pub fn boundary_csv(curve: &BoundaryCurve) -> String {
    let mut s = String::from("theta,re,im\n");
    for p in &curve.samples {
        let _ = writeln!(s, "{},{},{}", num(p.theta), num(p.w.re), num(p.w.im));
    }
    s
}

fn verdict(c: Containment) -> &'static str {
    match c {
        Containment::Inside => "inside",
        Containment::Boundary => "boundary",
        Containment::Outside => "outside",
    }
}

/// `index,seed,degree,re,im,verdict`.
pub fn sample_csv(rows: &[SampleRow]) -> String {
    let mut s = String::from("index,seed,degree,re,im,verdict\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.index,
            r.seed,
            r.degree,
            num(r.value.re),
            num(r.value.im),
            verdict(r.verdict)
        );
    }
    s
}

fn coord(x: f64) -> String {
    format!("{x:.9e}")
}

/// The curve as one closed polyline, with an axis cross at the centroid.
/// The imaginary axis points up.
pub fn boundary_svg(curve: &BoundaryCurve) -> String {
    let poly = curve.polygon();
    let pts: Vec<Complex64> = poly
        .vertices
        .iter()
        .map(|w| Complex64::new(w.re, -w.im))
        .collect();
    let centroid = poly.centroid();
    let center = Complex64::new(centroid.re, -centroid.im);
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for p in &pts {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let span = (x1 - x0).max(y1 - y0);
    let span = if span > 0.0 {
        span
    } else {
        1.0 + centroid.norm() * 1e-6
    };
    let pad = 0.05 * span;
    let (vx, vy) = (x0 - pad, y0 - pad);
    let (vw, vh) = ((x1 - x0) + 2.0 * pad, (y1 - y0) + 2.0 * pad);
    let (vw, vh) = (vw.max(2.0 * pad), vh.max(2.0 * pad));
    let stroke = span / 400.0;
    let arm = 0.05 * span;

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="640" height="640" viewBox="{} {} {} {}">"#,
        coord(vx),
        coord(vy),
        coord(vw),
        coord(vh)
    );
    let _ = writeln!(
        s,
        r#"<g stroke="gray" stroke-width="{}"><line x1="{}" y1="{}" x2="{}" y2="{}"/><line x1="{}" y1="{}" x2="{}" y2="{}"/></g>"#,
        coord(stroke),
        coord(center.re - arm),
        coord(center.im),
        coord(center.re + arm),
        coord(center.im),
        coord(center.re),
        coord(center.im - arm),
        coord(center.re),
        coord(center.im + arm)
    );
    let mut points = String::new();
    for (i, p) in pts.iter().chain(pts.first()).enumerate() {
        if i > 0 {
            points.push(' ');
        }
        let _ = write!(points, "{},{}", coord(p.re), coord(p.im));
    }
    let _ = writeln!(
        s,
        r#"<polyline fill="none" stroke="black" stroke-width="{}" points="{}"/>"#,
        coord(stroke),
        points
    );
    s.push_str("</svg>\n");
    s
}
