//! Bounded convex domains and their boundary oracles.
//!
//! A [`ConvexBody`] is one of four representable kinds: planar polygon,
//! ellipsoid, Euclidean ball, or an intersection of half-spaces. Every body
//! exposes the same ray oracle ([`ConvexBody::boundary_distance`]): from an
//! interior point, how far one can travel in a direction before leaving the
//! closure. Every kind answers it in closed form (a ratio test over edges or
//! facets, a quadratic for ellipsoids and balls). The membership-bisection
//! oracle [`ConvexBody::boundary_distance_bisect`] works for any kind and
//! serves as the cross-check.
//!
//! Conventions:
//! - Boundary classification uses `BOUNDARY_TOL` relative to the Euclidean
//!   diameter of the body.
//! - Polygons are stored counterclockwise.
//! - Bodies are immutable after validation.

mod point;
mod spec;

pub use point::{cross2, Direction, Point};
pub use spec::{BodySpec, Halfspace};

use serde::Serialize;

use crate::error::{GeomError, Result};

/// Boundary tolerance, relative to the body's Euclidean diameter.
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Absolute tolerance below which two points are considered equal.
pub const POINT_TOL: f64 = 1e-12;
/// Tolerance on `|cross(u1, u2)|` for treating two lines as parallel.
pub const PARALLEL_TOL: f64 = 1e-12;
/// A polytope whose boundary cannot be reached within this radius is unbounded.
pub const ESCAPE_RADIUS: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Polygon,
    Ellipsoid,
    Disk,
    Polytope,
}

/// Ordered boundary pair of the line through two interior points.
#[derive(Clone, Debug, PartialEq)]
pub struct Chord {
    pub tail: Point,
    pub head: Point,
}

impl Chord {
    pub fn reversed(&self) -> Chord {
        Chord {
            tail: self.head.clone(),
            head: self.tail.clone(),
        }
    }
}

#[derive(Clone, Debug)]
struct Polygon {
    vertices: Vec<[f64; 2]>,
    /// Unit outward edge normals; edge `i` runs from vertex `i` to `i + 1`.
    normals: Vec<[f64; 2]>,
    offsets: Vec<f64>,
}

#[derive(Clone, Debug)]
struct Ellipsoid {
    center: Point,
    semi_axes: Vec<f64>,
    /// Unit principal axes.
    axes: Vec<Point>,
}

#[derive(Clone, Debug)]
struct Polytope {
    normals: Vec<Point>,
    offsets: Vec<f64>,
    vertices: Vec<Point>,
}

#[derive(Clone, Debug)]
enum Shape {
    Polygon(Polygon),
    Ellipsoid(Ellipsoid),
    Disk { center: Point, radius: f64 },
    Polytope(Polytope),
}

/// A validated, non-empty, bounded, open convex set.
#[derive(Clone, Debug)]
pub struct ConvexBody {
    shape: Shape,
    dim: usize,
    diameter: f64,
    center: Point,
    bbox_min: Point,
    bbox_max: Point,
    spec: BodySpec,
}

/// Result of [`validate_body`]: the body plus anything that was silently fixed.
#[derive(Clone, Debug)]
pub struct ValidatedBody {
    pub body: ConvexBody,
    /// Polygon input was clockwise and has been reversed.
    pub reoriented: bool,
    pub warnings: Vec<String>,
}

pub fn validate_body(spec: &BodySpec) -> Result<ValidatedBody> {
    let mut warnings = Vec::new();
    let mut reoriented = false;
    let body = match spec {
        BodySpec::Polygon { vertices } => {
            let (poly, flipped) = build_polygon(vertices)?;
            if flipped {
                reoriented = true;
                warnings.push("polygon vertices were clockwise; reversed".to_string());
            }
            let pts: Vec<Point> = poly.vertices.iter().map(|v| Point::xy(v[0], v[1])).collect();
            let n = pts.len() as f64;
            let center = Point::xy(
                pts.iter().map(Point::x).sum::<f64>() / n,
                pts.iter().map(Point::y).sum::<f64>() / n,
            );
            let (bbox_min, bbox_max) = bbox_of(&pts);
            ConvexBody {
                dim: 2,
                diameter: max_pair_distance(&pts),
                center,
                bbox_min,
                bbox_max,
                shape: Shape::Polygon(poly),
                spec: spec.clone(),
            }
        }
        BodySpec::Ellipse {
            center,
            semi_axes,
            rotation_rad,
            rotation,
        } => {
            let ell = build_ellipsoid(center, semi_axes, *rotation_rad, rotation.as_deref())?;
            let dim = center.len();
            let half: Vec<f64> = (0..dim)
                .map(|k| {
                    ell.axes
                        .iter()
                        .zip(&ell.semi_axes)
                        .map(|(a, s)| (a.coords()[k] * s).powi(2))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let c = ell.center.clone();
            ConvexBody {
                dim,
                diameter: 2.0 * ell.semi_axes.iter().cloned().fold(0.0, f64::max),
                bbox_min: Point::new(c.coords().iter().zip(&half).map(|(c, h)| c - h)),
                bbox_max: Point::new(c.coords().iter().zip(&half).map(|(c, h)| c + h)),
                center: c,
                shape: Shape::Ellipsoid(ell),
                spec: spec.clone(),
            }
        }
        BodySpec::Disk { center, radius } => {
            check_vector(center, "disk center")?;
            if !(radius.is_finite() && *radius > 0.0) {
                return Err(GeomError::InvalidSpec(format!("disk radius must be > 0, got {radius}")));
            }
            let c = Point::new(center.iter().copied());
            ConvexBody {
                dim: center.len(),
                diameter: 2.0 * radius,
                bbox_min: Point::new(center.iter().map(|x| x - radius)),
                bbox_max: Point::new(center.iter().map(|x| x + radius)),
                center: c.clone(),
                shape: Shape::Disk {
                    center: c,
                    radius: *radius,
                },
                spec: spec.clone(),
            }
        }
        BodySpec::Polytope { halfspaces } => build_polytope(halfspaces, spec)?,
    };
    Ok(ValidatedBody {
        body,
        reoriented,
        warnings,
    })
}

fn check_vector(v: &[f64], what: &str) -> Result<()> {
    if v.len() < 2 {
        return Err(GeomError::InvalidSpec(format!("{what} must have dimension >= 2")));
    }
    if v.iter().any(|c| !c.is_finite()) {
        return Err(GeomError::InvalidSpec(format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn bbox_of(pts: &[Point]) -> (Point, Point) {
    let dim = pts[0].dim();
    let lo = Point::new((0..dim).map(|k| pts.iter().map(|p| p.coords()[k]).fold(f64::INFINITY, f64::min)));
    let hi = Point::new((0..dim).map(|k| pts.iter().map(|p| p.coords()[k]).fold(f64::NEG_INFINITY, f64::max)));
    (lo, hi)
}

fn max_pair_distance(pts: &[Point]) -> f64 {
    let mut best: f64 = 0.0;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max(a.dist(b));
        }
    }
    best
}

fn build_polygon(input: &[[f64; 2]]) -> Result<(Polygon, bool)> {
    if input.len() < 3 {
        return Err(GeomError::InvalidSpec(format!(
            "polygon needs at least 3 vertices, got {}",
            input.len()
        )));
    }
    if input.iter().flatten().any(|c| !c.is_finite()) {
        return Err(GeomError::InvalidSpec("polygon has non-finite vertices".into()));
    }
    let n = input.len();
    let twice_area: f64 = (0..n)
        .map(|i| {
            let (a, b) = (input[i], input[(i + 1) % n]);
            a[0] * b[1] - a[1] * b[0]
        })
        .sum();
    let mut vertices = input.to_vec();
    let flipped = twice_area < 0.0;
    if flipped {
        vertices.reverse();
    }

    let edge = |i: usize| {
        let (a, b) = (vertices[i], vertices[(i + 1) % n]);
        [b[0] - a[0], b[1] - a[1]]
    };
    let mut turning = 0.0;
    for i in 0..n {
        let e0 = edge((i + n - 1) % n);
        let e1 = edge(i);
        let cr = cross2(&e0, &e1);
        let scale = (e0[0].hypot(e0[1])) * (e1[0].hypot(e1[1]));
        if !(cr > 1e-12 * scale) {
            return Err(GeomError::NonConvex { index: i });
        }
        turning += cr.atan2(e0[0] * e1[0] + e0[1] * e1[1]);
    }
    // a consistently left-turning but self-intersecting loop winds more than once
    if (turning - std::f64::consts::TAU).abs() > 1e-6 {
        return Err(GeomError::NonConvex { index: 0 });
    }

    let mut normals = Vec::with_capacity(n);
    let mut offsets = Vec::with_capacity(n);
    for i in 0..n {
        let e = edge(i);
        let len = e[0].hypot(e[1]);
        let nrm = [e[1] / len, -e[0] / len];
        offsets.push(nrm[0] * vertices[i][0] + nrm[1] * vertices[i][1]);
        normals.push(nrm);
    }
    Ok((
        Polygon {
            vertices,
            normals,
            offsets,
        },
        flipped,
    ))
}

fn build_ellipsoid(
    center: &[f64],
    semi_axes: &[f64],
    rotation_rad: Option<f64>,
    rotation: Option<&[Vec<f64>]>,
) -> Result<Ellipsoid> {
    check_vector(center, "ellipse center")?;
    let dim = center.len();
    if semi_axes.len() != dim {
        return Err(GeomError::DimensionMismatch {
            expected: dim,
            got: semi_axes.len(),
        });
    }
    if semi_axes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(GeomError::InvalidSpec("semi-axes must all be > 0".into()));
    }
    let axes: Vec<Point> = match (rotation_rad, rotation) {
        (Some(_), Some(_)) => {
            return Err(GeomError::InvalidSpec(
                "give either rotation_rad or rotation, not both".into(),
            ))
        }
        (Some(theta), None) => {
            if dim != 2 {
                return Err(GeomError::InvalidSpec("rotation_rad applies to 2-D ellipses only".into()));
            }
            let (s, c) = theta.sin_cos();
            vec![Point::xy(c, s), Point::xy(-s, c)]
        }
        (None, Some(rows)) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(GeomError::InvalidSpec(format!("rotation must be {dim}x{dim}")));
            }
            let cols: Vec<Point> = (0..dim).map(|j| Point::new(rows.iter().map(|r| r[j]))).collect();
            for (i, a) in cols.iter().enumerate() {
                for (j, b) in cols.iter().enumerate() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    if (a.dot(b) - expect).abs() > 1e-9 {
                        return Err(GeomError::InvalidSpec("rotation is not orthonormal".into()));
                    }
                }
            }
            cols
        }
        (None, None) => (0..dim).map(|k| Direction::axis(dim, k, true).to_point()).collect(),
    };
    Ok(Ellipsoid {
        center: Point::new(center.iter().copied()),
        semi_axes: semi_axes.to_vec(),
        axes,
    })
}

fn build_polytope(halfspaces: &[Halfspace], spec: &BodySpec) -> Result<ConvexBody> {
    let Some(first) = halfspaces.first() else {
        return Err(GeomError::InvalidSpec("polytope needs at least one halfspace".into()));
    };
    let dim = first.normal.len();
    let mut normals = Vec::with_capacity(halfspaces.len());
    let mut offsets = Vec::with_capacity(halfspaces.len());
    for h in halfspaces {
        check_vector(&h.normal, "halfspace normal")?;
        if h.normal.len() != dim {
            return Err(GeomError::DimensionMismatch {
                expected: dim,
                got: h.normal.len(),
            });
        }
        let n = Point::new(h.normal.iter().copied());
        let len = n.norm();
        if !(len > 0.0) || !h.offset.is_finite() {
            return Err(GeomError::InvalidSpec("halfspace normal must be non-zero".into()));
        }
        normals.push(&n * (1.0 / len));
        offsets.push(h.offset / len);
    }
    let slack_sd = |p: &Point| -> f64 {
        normals
            .iter()
            .zip(&offsets)
            .map(|(n, b)| n.dot(p) - b)
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let seed = find_strict_point(&normals, &offsets, dim).ok_or(GeomError::EmptyInterior)?;
    for k in 0..dim {
        for positive in [true, false] {
            let u = Direction::axis(dim, k, positive);
            let probe = bisect_exit(&slack_sd, &seed, &u, 1.0, ESCAPE_RADIUS, 1e-9);
            if probe.is_none() {
                return Err(GeomError::Unbounded { radius: ESCAPE_RADIUS });
            }
        }
    }

    let vertices = enumerate_vertices(&normals, &offsets, dim);
    if vertices.len() < dim + 1 {
        return Err(GeomError::EmptyInterior);
    }
    let (bbox_min, bbox_max) = bbox_of(&vertices);
    let diameter = max_pair_distance(&vertices);
    if !(diameter > 0.0) {
        return Err(GeomError::EmptyInterior);
    }
    let n = vertices.len() as f64;
    let centroid = Point::new((0..dim).map(|k| vertices.iter().map(|v| v.coords()[k]).sum::<f64>() / n));
    let center = if slack_sd(&centroid) < -BOUNDARY_TOL * diameter {
        centroid
    } else if slack_sd(&seed) < -BOUNDARY_TOL * diameter {
        seed
    } else {
        return Err(GeomError::EmptyInterior);
    };
    Ok(ConvexBody {
        shape: Shape::Polytope(Polytope {
            normals,
            offsets,
            vertices,
        }),
        dim,
        diameter,
        center,
        bbox_min,
        bbox_max,
        spec: spec.clone(),
    })
}

/// Relaxation method: find a point with slack at least `sigma` in every constraint.
fn find_strict_point(normals: &[Point], offsets: &[f64], dim: usize) -> Option<Point> {
    const SIGMA: f64 = 1e-7;
    let mut x = Point::zeros(dim);
    for _ in 0..50_000 {
        let (j, slack) = normals
            .iter()
            .zip(offsets)
            .map(|(n, b)| b - n.dot(&x))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, s)| if s < acc.1 { (j, s) } else { acc });
        if slack >= SIGMA {
            return Some(x);
        }
        let step = slack - 2.0 * SIGMA;
        x = &x + &(&normals[j] * step);
    }
    None
}

fn enumerate_vertices(normals: &[Point], offsets: &[f64], dim: usize) -> Vec<Point> {
    use nalgebra::{DMatrix, DVector};
    let m = normals.len();
    let mut out: Vec<Point> = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    if m < dim {
        return out;
    }
    loop {
        let a = DMatrix::from_fn(dim, dim, |r, c| normals[idx[r]].coords()[c]);
        let b = DVector::from_fn(dim, |r, _| offsets[idx[r]]);
        if let Some(sol) = a.lu().solve(&b) {
            let v = Point::new(sol.iter().copied());
            let feasible = v.is_finite()
                && normals
                    .iter()
                    .zip(offsets)
                    .all(|(n, b)| n.dot(&v) <= b + 1e-9 * (1.0 + b.abs()));
            if feasible && !out.iter().any(|w| w.dist(&v) < 1e-9) {
                out.push(v);
            }
        }
        // next combination in lexicographic order
        let mut k = dim;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if idx[k] < m - dim + k {
                idx[k] += 1;
                for j in k + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Bisection on a signed-distance-like function along `p + s u`.
///
/// Grows the bracket from `hi` by doubling until the sign changes, giving up
/// beyond `limit`; then halves until narrower than `width`.
fn bisect_exit(
    sd: &dyn Fn(&Point) -> f64,
    p: &Point,
    u: &Direction,
    mut hi: f64,
    limit: f64,
    width: f64,
) -> Option<f64> {
    let mut lo = 0.0;
    while sd(&p.offset(u, hi)) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return None;
        }
    }
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sd(&p.offset(u, mid)) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

impl ConvexBody {
    /// Builds a body from its description, discarding the validation report.
    pub fn new(spec: &BodySpec) -> Result<Self> {
        validate_body(spec).map(|v| v.body)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(&BodySpec::from_json(text)?)
    }

    pub fn kind(&self) -> BodyKind {
        match self.shape {
            Shape::Polygon(_) => BodyKind::Polygon,
            Shape::Ellipsoid(_) => BodyKind::Ellipsoid,
            Shape::Disk { .. } => BodyKind::Disk,
            Shape::Polytope(_) => BodyKind::Polytope,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Euclidean diameter of the closure.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// A canonical interior point (center, vertex centroid).
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn bounding_box(&self) -> (&Point, &Point) {
        (&self.bbox_min, &self.bbox_max)
    }

    pub fn spec(&self) -> &BodySpec {
        &self.spec
    }

    /// Absolute boundary tolerance for this body.
    pub fn boundary_tol(&self) -> f64 {
        BOUNDARY_TOL * self.diameter
    }

    /// Signed Euclidean distance to the boundary, negative inside.
    ///
    /// Exact for balls and polygons and for interior points of polytopes; for
    /// ellipsoids a first-order estimate that is exact on the boundary.
    pub fn signed_distance(&self, p: &Point) -> f64 {
        match &self.shape {
            Shape::Disk { center, radius } => p.dist(center) - radius,
            Shape::Polygon(poly) => {
                let (x, y) = (p.x(), p.y());
                let inside = poly
                    .normals
                    .iter()
                    .zip(&poly.offsets)
                    .map(|(n, b)| n[0] * x + n[1] * y - b)
                    .fold(f64::NEG_INFINITY, f64::max);
                if inside <= 0.0 {
                    return inside;
                }
                let n = poly.vertices.len();
                (0..n)
                    .map(|i| segment_distance([x, y], poly.vertices[i], poly.vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            Shape::Ellipsoid(e) => {
                let rel = p - &e.center;
                let q: Vec<f64> = e.axes.iter().zip(&e.semi_axes).map(|(a, s)| a.dot(&rel) / s).collect();
                let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
                if qn == 0.0 {
                    return -e.semi_axes.iter().cloned().fold(f64::INFINITY, f64::min);
                }
                let grad = q
                    .iter()
                    .zip(&e.semi_axes)
                    .map(|(qi, s)| (qi / (qn * s)).powi(2))
                    .sum::<f64>()
                    .sqrt();
                (qn - 1.0) / grad
            }
            Shape::Polytope(h) => h
                .normals
                .iter()
                .zip(&h.offsets)
                .map(|(n, b)| n.dot(p) - b)
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn classify(&self, p: &Point) -> Membership {
        if p.dim() != self.dim || !p.is_finite() {
            return Membership::Exterior;
        }
        let sd = self.signed_distance(p);
        let tol = self.boundary_tol();
        if sd < -tol {
            Membership::Interior
        } else if sd <= tol {
            Membership::Boundary
        } else {
            Membership::Exterior
        }
    }

    #[inline]
    pub fn is_interior(&self, p: &Point) -> bool {
        self.classify(p) == Membership::Interior
    }

    /// Distance `s > 0` such that `p + s u` lies on the boundary.
    pub fn boundary_distance(&self, p: &Point, u: &Direction) -> Result<f64> {
        if u.dim() != self.dim {
            return Err(GeomError::DimensionMismatch {
                expected: self.dim,
                got: u.dim(),
            });
        }
        if !self.is_interior(p) {
            return Err(GeomError::ExteriorBase);
        }
        Ok(self.exit_distance(p, u))
    }

    /// Ray oracle without the interior check.
    pub(crate) fn exit_distance(&self, p: &Point, u: &Direction) -> f64 {
        match &self.shape {
            Shape::Disk { center, radius } => {
                let q = p - center;
                let b = u.dot(&q);
                let c = q.dot(&q) - radius * radius;
                positive_root(1.0, b, c)
            }
            Shape::Ellipsoid(e) => {
                let rel = p - &e.center;
                let (mut a, mut b, mut c) = (0.0, 0.0, -1.0);
                for (axis, s) in e.axes.iter().zip(&e.semi_axes) {
                    let q = axis.dot(&rel) / s;
                    let w = u.dot(axis) / s;
                    a += w * w;
                    b += q * w;
                    c += q * q;
                }
                positive_root(a, b, c)
            }
            Shape::Polygon(poly) => {
                let (x, y) = (p.x(), p.y());
                let uc = u.coords();
                let mut best = f64::INFINITY;
                for (n, off) in poly.normals.iter().zip(&poly.offsets) {
                    let den = n[0] * uc[0] + n[1] * uc[1];
                    if den > 0.0 {
                        let s = (off - n[0] * x - n[1] * y) / den;
                        best = best.min(s);
                    }
                }
                best.max(0.0)
            }
            Shape::Polytope(h) => {
                let mut best = f64::INFINITY;
                for (n, off) in h.normals.iter().zip(&h.offsets) {
                    let den = u.dot(n);
                    if den > 0.0 {
                        best = best.min((off - n.dot(p)) / den);
                    }
                }
                best.max(0.0)
            }
        }
    }

    /// Generic membership-bisection ray oracle; works for every kind.
    pub fn boundary_distance_bisect(&self, p: &Point, u: &Direction) -> Result<f64> {
        if !self.is_interior(p) {
            return Err(GeomError::ExteriorBase);
        }
        self.bisect_boundary(p, u).ok_or(GeomError::Unbounded { radius: ESCAPE_RADIUS })
    }

    fn bisect_boundary(&self, p: &Point, u: &Direction) -> Option<f64> {
        let sd = |q: &Point| self.signed_distance(q);
        bisect_exit(&sd, p, u, self.diameter, ESCAPE_RADIUS, self.boundary_tol())
    }

    pub fn boundary_hit(&self, p: &Point, u: &Direction) -> Result<Point> {
        let s = self.boundary_distance(p, u)?;
        Ok(p.offset(u, s))
    }

    /// The chord `(x', y')` through `x` and `y`, ordered `x', x, y, y'`.
    pub fn chord_through(&self, x: &Point, y: &Point) -> Result<Chord> {
        let (u, _, s_tail, s_head) = self.chord_params(x, y)?;
        Ok(Chord {
            tail: x.offset(&u, -s_tail),
            head: y.offset(&u, s_head),
        })
    }

    /// `(unit(y - x), |xy|, |x x'|, |y y'|)` for the chord through `x` and `y`.
    pub(crate) fn chord_params(&self, x: &Point, y: &Point) -> Result<(Direction, f64, f64, f64)> {
        if !self.is_interior(x) {
            return Err(GeomError::ExteriorPoint(x.to_string()));
        }
        if !self.is_interior(y) {
            return Err(GeomError::ExteriorPoint(y.to_string()));
        }
        let len = x.dist(y);
        if len <= POINT_TOL {
            return Err(GeomError::CoincidentPoints { tol: POINT_TOL });
        }
        let u = Direction::between(x, y)?;
        let s_tail = self.exit_distance(x, &u.reversed());
        let s_head = self.exit_distance(y, &u);
        Ok((u, len, s_tail, s_head))
    }

    /// True iff the boundary contains no non-trivial segment.
    pub fn is_strictly_convex(&self) -> bool {
        matches!(self.shape, Shape::Disk { .. } | Shape::Ellipsoid(_))
    }

    /// Boundary segments `(α, β)` of a planar body, counterclockwise.
    pub fn flat_edges(&self) -> Vec<(Point, Point)> {
        let ring: Vec<Point> = match &self.shape {
            Shape::Polygon(poly) => poly.vertices.iter().map(|v| Point::xy(v[0], v[1])).collect(),
            Shape::Polytope(h) if self.dim == 2 => {
                let mut vs = h.vertices.clone();
                let c = self.center.clone();
                vs.sort_by(|a, b| a.angle_from(&c).total_cmp(&b.angle_from(&c)));
                vs
            }
            _ => return Vec::new(),
        };
        let n = ring.len();
        (0..n).map(|i| (ring[i].clone(), ring[(i + 1) % n].clone())).collect()
    }

    /// Closed outline of a planar body: exact vertices for polygons, otherwise
    /// `n` boundary hits from the center at uniform angles.
    pub fn outline(&self, n: usize) -> Result<Vec<Point>> {
        if self.dim != 2 {
            return Err(GeomError::DimensionUnsupported {
                op: "outline",
                dim: self.dim,
            });
        }
        if let Shape::Polygon(poly) = &self.shape {
            return Ok(poly.vertices.iter().map(|v| Point::xy(v[0], v[1])).collect());
        }
        (0..n)
            .map(|k| {
                let u = Direction::from_angle(std::f64::consts::TAU * k as f64 / n as f64);
                self.boundary_hit(&self.center, &u)
            })
            .collect()
    }
}

/// Positive root of `a s² + 2 b s + c = 0` for `c < 0`, without cancellation.
#[inline]
fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    let disc = (b * b - a * c).max(0.0).sqrt();
    if b <= 0.0 {
        (disc - b) / a
    } else {
        -c / (b + disc)
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let ap = [p[0] - a[0], p[1] - a[1]];
    let len2 = ab[0] * ab[0] + ab[1] * ab[1];
    let t = ((ap[0] * ab[0] + ap[1] * ab[1]) / len2).clamp(0.0, 1.0);
    let d = [ap[0] - t * ab[0], ap[1] - t * ab[1]];
    d[0].hypot(d[1])
}

/// Intersection of two planar lines `p1 + s u1` and `p2 + t u2`.
#[derive(Clone, Debug, PartialEq)]
pub enum LineMeet {
    Point(Point),
    Parallel,
}

pub fn line_intersection(p1: &Point, u1: &Direction, p2: &Point, u2: &Direction) -> Result<LineMeet> {
    for d in [p1.dim(), u1.dim(), p2.dim(), u2.dim()] {
        if d != 2 {
            return Err(GeomError::DimensionUnsupported {
                op: "line_intersection",
                dim: d,
            });
        }
    }
    let den = cross2(u1.coords(), u2.coords());
    if den.abs() < PARALLEL_TOL {
        return Ok(LineMeet::Parallel);
    }
    let w = p2 - p1;
    let s = cross2(w.coords(), u2.coords()) / den;
    Ok(LineMeet::Point(p1.offset(u1, s)))
}
