//! Vectors, norms, and unit-ball geometry.
//!
//! Four norm kinds are supported: Euclidean, l1, l∞, and the gauge
//! (Minkowski functional) of an origin-symmetric convex polygon. Polygon
//! gauges stand in for arbitrary planar norms.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};

/// Default slack used for every comparison against the unit ball.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Symmetry tolerance for polygon vertex lists.
const SYMMETRY_TOL: f64 = 1e-12;

/// A point of R^d with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyVector);
        }
        if let Some(position) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { position });
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim.max(1)])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, t: f64) -> Vector {
        Vector(self.0.iter().map(|c| c * t).collect())
    }

    /// Largest absolute coordinate difference.
    pub fn max_abs_diff(&self, other: &Vector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|c| c.is_finite()));
        Self(coords)
    }
}

/// Panics on non-finite coordinates; use [`Vector::new`] for untrusted data.
impl<const N: usize> From<[f64; N]> for Vector {
    fn from(coords: [f64; N]) -> Self {
        Vector::new(coords.to_vec()).expect("finite, non-empty coordinates")
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim(), rhs.dim(), "dimension mismatch");
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        Vector(self.0.iter().map(|c| -c).collect())
    }
}

impl Mul<f64> for &Vector {
    type Output = Vector;
    fn mul(self, t: f64) -> Vector {
        self.scale(t)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Unit ball `{x : <a_f, x> <= 1 for all f}` of a symmetric convex polygon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolygonGauge {
    /// Canonical vertices: counterclockwise, starting from the smallest
    /// polar angle in (-π, π], collinear points removed.
    vertices: Vec<[f64; 2]>,
    /// `facets[i]` supports the edge from `vertices[i]` to `vertices[i + 1]`.
    #[serde(skip)]
    facets: Vec<[f64; 2]>,
}

impl PolygonGauge {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn facets(&self) -> &[[f64; 2]] {
        &self.facets
    }

    pub fn gauge(&self, x: f64, y: f64) -> f64 {
        self.facets
            .iter()
            .map(|a| a[0] * x + a[1] * y)
            .fold(0.0, f64::max)
    }
}

fn cross(p: [f64; 2], q: [f64; 2]) -> f64 {
    p[0] * q[1] - p[1] * q[0]
}

/// Validates and canonicalizes a polygon vertex list, then derives one
/// supporting functional per edge.
pub fn build_gauge(vertices: &[Vector]) -> Result<PolygonGauge> {
    let invalid = |msg: String| Error::InvalidPolygon(msg);

    let mut points = Vec::with_capacity(vertices.len());
    for v in vertices {
        if v.dim() != 2 {
            return Err(invalid(format!("vertex {v} is not two-dimensional")));
        }
        points.push([v.coords()[0], v.coords()[1]]);
    }

    let scale = points
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(invalid("origin must lie strictly inside the polygon".into()));
    }
    let sym_tol = SYMMETRY_TOL * scale.max(1.0);

    // Exact duplicates carry no information.
    let mut unique: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    for p in points {
        if !unique
            .iter()
            .any(|q| (p[0] - q[0]).abs() <= sym_tol && (p[1] - q[1]).abs() <= sym_tol)
        {
            unique.push(p);
        }
    }

    for p in &unique {
        let mirrored = unique
            .iter()
            .any(|q| (p[0] + q[0]).abs() <= sym_tol && (p[1] + q[1]).abs() <= sym_tol);
        if !mirrored {
            return Err(invalid(format!(
                "vertex ({}, {}) has no mirror image; the polygon must be origin-symmetric",
                p[0], p[1]
            )));
        }
        if p[0].abs() <= sym_tol && p[1].abs() <= sym_tol {
            return Err(invalid("origin must lie strictly inside the polygon".into()));
        }
    }
    if unique.len() < 4 {
        return Err(invalid(format!(
            "need at least 4 distinct vertices, found {}",
            unique.len()
        )));
    }

    unique.sort_by(|p, q| p[1].atan2(p[0]).total_cmp(&q[1].atan2(q[0])));

    let area_tol = 1e-12 * scale * scale;
    for pair in unique.windows(2) {
        let (p, q) = (pair[0], pair[1]);
        if cross(p, q).abs() <= area_tol && p[0] * q[0] + p[1] * q[1] > 0.0 {
            return Err(invalid(format!(
                "vertices ({}, {}) and ({}, {}) lie on the same ray; the polygon is not convex",
                p[0], p[1], q[0], q[1]
            )));
        }
    }

    // Drop collinear vertices until every corner turns strictly left.
    loop {
        let n = unique.len();
        let mut dropped = None;
        for i in 0..n {
            let p = unique[(i + n - 1) % n];
            let q = unique[i];
            let r = unique[(i + 1) % n];
            let turn = cross([q[0] - p[0], q[1] - p[1]], [r[0] - q[0], r[1] - q[1]]);
            if turn < -area_tol {
                return Err(invalid(format!(
                    "vertex ({}, {}) is a reflex corner; the polygon is not convex",
                    q[0], q[1]
                )));
            }
            if turn <= area_tol {
                dropped = Some(i);
                break;
            }
        }
        match dropped {
            Some(i) => {
                unique.remove(i);
                if unique.len() < 4 {
                    return Err(invalid("polygon is degenerate (collinear vertices)".into()));
                }
            }
            None => break,
        }
    }

    let n = unique.len();
    let mut facets = Vec::with_capacity(n);
    for i in 0..n {
        let p = unique[i];
        let q = unique[(i + 1) % n];
        let c = cross(p, q);
        if c <= area_tol {
            return Err(invalid("origin must lie strictly inside the polygon".into()));
        }
        facets.push([(q[1] - p[1]) / c, (p[0] - q[0]) / c]);
    }

    let gauge = PolygonGauge {
        vertices: unique,
        facets,
    };
    for p in &gauge.vertices {
        let g = gauge.gauge(p[0], p[1]);
        if (g - 1.0).abs() > 1e-9 {
            return Err(invalid(format!(
                "vertex ({}, {}) has gauge {g}, expected 1",
                p[0], p[1]
            )));
        }
    }
    Ok(gauge)
}

/// Norm descriptor. Polygon norms are two-dimensional only.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormSpec {
    Euclidean,
    L1,
    Linf,
    Polygon(PolygonGauge),
}

impl NormSpec {
    pub fn polygon(vertices: &[Vector]) -> Result<Self> {
        build_gauge(vertices).map(NormSpec::Polygon)
    }

    /// Polygon from raw `[x, y]` pairs.
    pub fn polygon_from_pairs(pairs: &[[f64; 2]]) -> Result<Self> {
        let vertices = pairs
            .iter()
            .map(|p| Vector::new(p.to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Self::polygon(&vertices)
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            NormSpec::Polygon(_) if dim != 2 => Err(Error::DimensionMismatch {
                expected: 2,
                found: dim,
            }),
            _ => Ok(()),
        }
    }

    pub fn norm(&self, v: &Vector) -> Result<f64> {
        self.check_dim(v.dim())?;
        Ok(self.norm_of(v.coords()))
    }

    /// Unchecked evaluation on a raw coordinate slice. Polygon norms read
    /// the first two coordinates.
    pub(crate) fn norm_of(&self, x: &[f64]) -> f64 {
        match self {
            NormSpec::Euclidean => x.iter().map(|c| c * c).sum::<f64>().sqrt(),
            NormSpec::L1 => x.iter().map(|c| c.abs()).sum(),
            NormSpec::Linf => x.iter().map(|c| c.abs()).fold(0.0, f64::max),
            NormSpec::Polygon(g) => g.gauge(x[0], x[1]),
        }
    }

    /// Largest absolute coordinate attained on the unit ball.
    pub fn unit_ball_extent(&self) -> f64 {
        match self {
            NormSpec::Euclidean | NormSpec::L1 | NormSpec::Linf => 1.0,
            NormSpec::Polygon(g) => g
                .vertices
                .iter()
                .map(|p| p[0].abs().max(p[1].abs()))
                .fold(0.0, f64::max),
        }
    }

    pub fn is_euclidean(&self) -> bool {
        matches!(self, NormSpec::Euclidean)
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormSpec::Euclidean => write!(f, "euclidean"),
            NormSpec::L1 => write!(f, "l1"),
            NormSpec::Linf => write!(f, "linf"),
            NormSpec::Polygon(g) => write!(f, "polygon({} vertices)", g.vertices.len()),
        }
    }
}

/// Counterclockwise rotation of a planar vector.
pub fn rotate(v: &Vector, angle: f64) -> Result<Vector> {
    if v.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: v.dim(),
        });
    }
    let (s, c) = angle.sin_cos();
    let [x, y] = [v.coords()[0], v.coords()[1]];
    Ok(Vector::from_raw(vec![c * x - s * y, s * x + c * y]))
}

/// Samples a point of the closed unit ball. Uniform for the l-norms and
/// polygon gauges; deterministic for a given generator state.
pub fn random_unit_ball_vector<R: Rng + ?Sized>(
    spec: &NormSpec,
    dim: usize,
    rng: &mut R,
) -> Result<Vector> {
    if dim == 0 {
        return Err(Error::EmptyVector);
    }
    spec.check_dim(dim)?;
    let coords = match spec {
        NormSpec::Euclidean => {
            let mut dir: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
            let len = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
            let radius = rng.gen::<f64>().powf(1.0 / dim as f64);
            let factor = if len > 0.0 { radius / len } else { 0.0 };
            dir.iter_mut().for_each(|c| *c *= factor);
            dir
        }
        NormSpec::L1 => {
            let weights: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = weights.iter().sum();
            let radius = rng.gen::<f64>().powf(1.0 / dim as f64);
            weights
                .into_iter()
                .map(|w| {
                    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    sign * radius * w / total
                })
                .collect()
        }
        NormSpec::Linf => (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect(),
        NormSpec::Polygon(g) => {
            let extent = spec.unit_ball_extent();
            loop {
                let x = rng.gen_range(-extent..=extent);
                let y = rng.gen_range(-extent..=extent);
                if g.gauge(x, y) <= 1.0 {
                    break vec![x, y];
                }
            }
        }
    };
    Ok(Vector::from_raw(coords))
}

/// Random origin-symmetric convex polygon with `2m` vertices, where `m` is
/// drawn from `half_vertices`. Built from `m` edge vectors with increasing
/// directions in `[0, π)` followed by their negations, so the result is
/// convex and symmetric by construction.
pub fn random_symmetric_polygon<R: Rng + ?Sized>(
    rng: &mut R,
    half_vertices: std::ops::RangeInclusive<usize>,
) -> Result<NormSpec> {
    let m = rng.gen_range(half_vertices);
    if m < 2 {
        return Err(Error::InvalidPolygon("need at least 2 edge directions".into()));
    }
    loop {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..PI)).collect();
        angles.sort_by(f64::total_cmp);
        let min_gap = angles
            .windows(2)
            .map(|w| w[1] - w[0])
            .chain(std::iter::once(angles[0] + PI - angles[m - 1]))
            .fold(f64::INFINITY, f64::min);
        if min_gap < 1e-3 {
            continue;
        }
        let edges: Vec<[f64; 2]> = angles
            .iter()
            .map(|a| {
                let len = rng.gen_range(0.3..1.5);
                [len * a.cos(), len * a.sin()]
            })
            .collect();
        let total = edges
            .iter()
            .fold([0.0, 0.0], |s, e| [s[0] + e[0], s[1] + e[1]]);
        let mut p = [-total[0] / 2.0, -total[1] / 2.0];
        let mut vertices = Vec::with_capacity(2 * m);
        for e in edges.iter().chain(edges.iter()) {
            vertices.push(p);
            let sign = if vertices.len() <= m { 1.0 } else { -1.0 };
            p = [p[0] + sign * e[0], p[1] + sign * e[1]];
        }
        // Exact symmetry: overwrite the second half with negated first half.
        for i in 0..m {
            vertices[m + i] = [-vertices[i][0], -vertices[i][1]];
        }
        if let Ok(spec) = NormSpec::polygon_from_pairs(&vertices) {
            return Ok(spec);
        }
    }
}
