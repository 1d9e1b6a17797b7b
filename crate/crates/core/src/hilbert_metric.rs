//! The Hilbert metric, its rays, spheres and balls.
//!
//! For interior points `x != y` with chord `x', x, y, y'`,
//!
//! ```text
//! d(x, y) = log( |x y'| |y x'| / (|x x'| |y y'|) )
//! ```
//!
//! Writing `L = |xy|`, `a = |x x'|` and `b = |y y'|` this is
//! `log1p(L / a) + log1p(L / b)`, which is how it is evaluated: the form stays
//! accurate when one of the points is close to the boundary.

use std::f64::consts::TAU;

use serde::Serialize;

use crate::convex_domain::{cross2, Chord, ConvexBody, Direction, Membership, Point, PARALLEL_TOL, POINT_TOL};
use crate::error::{GeomError, Result};

/// Tolerance on `|d(o, a2) - d(o, b2)|` accepted by [`concurrency_defect`].
pub const EQUIDISTANCE_TOL: f64 = 1e-9;

/// Cross ratio `|x y'| |y x'| / (|x x'| |y y'|)` with `x' = chord.tail`, `y' = chord.head`.
///
/// The four points need not lie on a body boundary; this is the plain
/// projective invariant of four ordered collinear points.
pub fn cross_ratio(x: &Point, y: &Point, chord: &Chord) -> Result<f64> {
    let (tail, head) = (&chord.tail, &chord.head);
    let span = head - tail;
    let len2 = span.dot(&span);
    if !(len2 > 0.0) {
        return Err(GeomError::CoincidentPoints { tol: POINT_TOL });
    }
    let len = len2.sqrt();
    let param = |p: &Point| -> Result<f64> {
        let rel = p - tail;
        let s = rel.dot(&span) / len2;
        let off_line = (&rel - &(&span * s)).norm();
        if off_line > POINT_TOL * len.max(1.0) {
            return Err(GeomError::OffChord);
        }
        Ok(s)
    };
    let (sx, sy) = (param(x)?, param(y)?);
    let slack = POINT_TOL / len;
    if sx < -slack || sy > 1.0 + slack || sx > sy + slack {
        return Err(GeomError::BadOrder);
    }
    if x.dist(y) <= POINT_TOL {
        return Ok(1.0);
    }
    Ok(x.dist(head) * y.dist(tail) / (x.dist(tail) * y.dist(head)))
}

/// Hilbert distance between two interior points.
pub fn distance(body: &ConvexBody, x: &Point, y: &Point) -> Result<f64> {
    for p in [x, y] {
        p.check_dim(body.dim())?;
        if !body.is_interior(p) {
            return Err(GeomError::ExteriorPoint(p.to_string()));
        }
    }
    if x.dist(y) <= POINT_TOL {
        return Ok(0.0);
    }
    let (_, len, a, b) = body.chord_params(x, y)?;
    Ok((len / a).ln_1p() + (len / b).ln_1p())
}

/// Geodesic ray from `base` in direction `dir`, parametrized by Hilbert arclength.
#[derive(Clone, Debug)]
pub struct RaySpec {
    pub base: Point,
    pub dir: Direction,
    /// Euclidean distance from the base to the boundary going backwards.
    pub a: f64,
    /// Euclidean distance from the base to the boundary going forwards.
    pub b: f64,
}

impl RaySpec {
    pub fn new(body: &ConvexBody, base: &Point, dir: &Direction) -> Result<Self> {
        let b = body.boundary_distance(base, dir)?;
        let a = body.boundary_distance(base, &dir.reversed())?;
        Ok(Self {
            base: base.clone(),
            dir: dir.clone(),
            a,
            b,
        })
    }

    /// Ray from `o` through `x`.
    pub fn through(body: &ConvexBody, o: &Point, x: &Point) -> Result<Self> {
        if o.dist(x) <= POINT_TOL {
            return Err(GeomError::DegenerateRay);
        }
        Self::new(body, o, &Direction::between(o, x)?)
    }

    /// Euclidean offset along the ray at Hilbert parameter `t`.
    ///
    /// Solves `log(b (s + a) / (a (b - s))) = t`, i.e.
    /// `s = a b (e^t - 1) / (b + a e^t)`, written in terms of `e^-t` so that it
    /// stays finite and strictly below `b` for large `t`.
    pub fn offset_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(GeomError::NegativeParameter(t));
        }
        let decay = (-t).exp();
        let s = self.a * self.b * -(-t).exp_m1() / (self.a + self.b * decay);
        // for huge t the closed form rounds onto the boundary
        Ok(if s < self.b { s } else { self.b.next_down() })
    }

    /// Inverse of [`Self::offset_at`]: Hilbert parameter of the point `base + s dir`.
    pub fn parameter_of(&self, s: f64) -> f64 {
        (s / self.a).ln_1p() - (-s / self.b).ln_1p()
    }

    pub fn point(&self, t: f64) -> Result<Point> {
        Ok(self.base.offset(&self.dir, self.offset_at(t)?))
    }
}

pub fn ray_point(ray: &RaySpec, t: f64) -> Result<Point> {
    ray.point(t)
}

fn require_planar(body: &ConvexBody, op: &'static str) -> Result<()> {
    if body.dim() != 2 {
        return Err(GeomError::DimensionUnsupported { op, dim: body.dim() });
    }
    Ok(())
}

/// Point of the Hilbert sphere `S(o, t)` in polar direction `theta`.
pub fn sphere_point(body: &ConvexBody, o: &Point, theta: f64, t: f64) -> Result<Point> {
    require_planar(body, "sphere_point")?;
    if !(t > 0.0) {
        return Err(GeomError::BadParameter(format!("sphere radius must be > 0, got {t}")));
    }
    RaySpec::new(body, o, &Direction::from_angle(theta))?.point(t)
}

#[derive(Clone, Debug, Serialize)]
pub struct BallBoundary {
    pub center: Point,
    pub radius: f64,
    /// Counterclockwise, uniform in direction angle.
    pub samples: Vec<Point>,
}

impl BallBoundary {
    /// Smallest signed turn `cross(e_k, e_{k+1})` along the closed polyline.
    pub fn min_turn(&self) -> f64 {
        let n = self.samples.len();
        (0..n)
            .map(|k| {
                let p0 = &self.samples[k];
                let p1 = &self.samples[(k + 1) % n];
                let p2 = &self.samples[(k + 2) % n];
                cross2((p1 - p0).coords(), (p2 - p1).coords())
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// All turns of the polyline are counterclockwise up to `tol`.
    pub fn is_euclidean_convex(&self, tol: f64) -> bool {
        self.min_turn() >= -tol
    }
}

/// Samples the boundary of the Hilbert ball `B(center, t)` at `n` uniform angles.
pub fn ball_boundary(body: &ConvexBody, center: &Point, t: f64, n: usize) -> Result<BallBoundary> {
    require_planar(body, "ball_boundary")?;
    if n < 4 {
        return Err(GeomError::BadParameter(format!("need at least 4 samples, got {n}")));
    }
    let samples = (0..n)
        .map(|k| sphere_point(body, center, TAU * k as f64 / n as f64, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(BallBoundary {
        center: center.clone(),
        radius: t,
        samples,
    })
}

/// `|d(x, z) + d(z, y) - d(x, y)|` for `z = (1 - λ) x + λ y`.
pub fn geodesic_defect(body: &ConvexBody, x: &Point, y: &Point, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(GeomError::BadParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if x.dist(y) <= POINT_TOL {
        return Err(GeomError::CoincidentPoints { tol: POINT_TOL });
    }
    let z = x.lerp(y, lambda);
    let whole = distance(body, x, y)?;
    let parts = distance(body, x, &z)? + distance(body, &z, y)?;
    Ok((parts - whole).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConcurrencyMode {
    Concurrent,
    Parallel,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcurrencyReport {
    /// Incidence residual of the three lines, see [`concurrency_defect`].
    pub defect: f64,
    pub mode: ConcurrencyMode,
    /// Common point of `L1` and `L3` in the concurrent case.
    pub meeting_point: Option<Point>,
    /// The meeting point classifies as exterior or boundary (vacuous when parallel).
    pub meeting_outside: bool,
}

/// Checks that the lines `L1 = a1 b1`, `L2 = a2 b2`, `L3 = a3 b3` built from the
/// chords through `o, a2` and `o, b2` meet in one point or are parallel.
///
/// Coordinates are centered at `o` and scaled by the body diameter; each line is
/// a unit vector in homogeneous coordinates, and the defect is
/// `|det[l1 l2 l3]|`, which vanishes exactly when the lines are projectively
/// concurrent (parallel = concurrent at infinity). In the parallel case the
/// defect also covers the largest pairwise `|sin|` between line directions.
pub fn concurrency_defect(body: &ConvexBody, o: &Point, a2: &Point, b2: &Point) -> Result<ConcurrencyReport> {
    require_planar(body, "concurrency_defect")?;
    let (va, vb) = (a2 - o, b2 - o);
    let (na, nb) = (va.norm(), vb.norm());
    if na <= POINT_TOL || nb <= POINT_TOL || cross2(va.coords(), vb.coords()).abs() <= 1e-9 * na * nb {
        return Err(GeomError::CollinearInput);
    }
    let mismatch = (distance(body, o, a2)? - distance(body, o, b2)?).abs();
    if mismatch > EQUIDISTANCE_TOL {
        return Err(GeomError::DistanceMismatch(mismatch));
    }
    let chord_a = body.chord_through(o, a2)?;
    let chord_b = body.chord_through(o, b2)?;
    let pairs = [(&chord_a.tail, &chord_b.tail), (a2, b2), (&chord_a.head, &chord_b.head)];

    let scale = body.diameter();
    let homog = |p: &Point| [(p.x() - o.x()) / scale, (p.y() - o.y()) / scale, 1.0];
    let lines: Vec<[f64; 3]> = pairs.iter().map(|(p, q)| unit3(cross3(homog(p), homog(q)))).collect();
    let mut defect = dot3(lines[0], cross3(lines[1], lines[2])).abs();

    let meet = cross3(lines[0], lines[2]);
    let meet_norm = dot3(meet, meet).sqrt();
    if meet[2].abs() <= PARALLEL_TOL * meet_norm {
        let dirs: Vec<Direction> = pairs
            .iter()
            .map(|(p, q)| Direction::between(p, q))
            .collect::<Result<_>>()?;
        for i in 0..3 {
            for j in i + 1..3 {
                defect = defect.max(cross2(dirs[i].coords(), dirs[j].coords()).abs());
            }
        }
        return Ok(ConcurrencyReport {
            defect,
            mode: ConcurrencyMode::Parallel,
            meeting_point: None,
            meeting_outside: true,
        });
    }
    let p = Point::xy(o.x() + scale * meet[0] / meet[2], o.y() + scale * meet[1] / meet[2]);
    let outside = body.classify(&p) != Membership::Interior;
    Ok(ConcurrencyReport {
        defect,
        mode: ConcurrencyMode::Concurrent,
        meeting_point: Some(p),
        meeting_outside: outside,
    })
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn unit3(a: [f64; 3]) -> [f64; 3] {
    let n = dot3(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}
