//! Arc decompositions of Hilbert circles and the layered planar cover.
//!
//! Circles `S_i = {d(o, ·) = iR}` are parametrized by the polar angle about `o`
//! (`θ ↦ sphere_point(o, θ, iR)`), so projecting between levels is the
//! identity on angles. A level stores its markers counterclockwise starting at
//! `x_0`; the kinds alternate `X, Y, X, Y, …`.
//!
//! Two arc conditions for a radius `R`:
//! - star 1: some point `b` of the arc `âc` has `d(a, b) ≥ R`;
//! - star 2: the arc has diameter at most `4R`.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::Serialize;

use crate::convex_domain::Point;
use crate::error::{GeomError, Result};
use crate::hilbert_metric::{ball_boundary, distance, sphere_point, RaySpec};
use crate::sampling::rng;
use crate::wrap_angle;

/// Sampling and tolerance settings for arc decompositions.
#[derive(Clone, Debug, Serialize)]
pub struct ArcConfig {
    /// Grid points per arc when locating the first `R`-crossing.
    pub n_arc: usize,
    /// Acceptance slack for both star conditions, relative to `R`.
    pub tol_arc_rel: f64,
    /// Bisection stops once the crossing bracket is this narrow (radians).
    pub angle_tol: f64,
    /// Samples per arc in the star 1 / star 2 audits.
    pub star_samples: usize,
}

impl Default for ArcConfig {
    fn default() -> Self {
        Self {
            n_arc: 512,
            tol_arc_rel: 1e-6,
            angle_tol: 1e-10,
            star_samples: 512,
        }
    }
}

impl ArcConfig {
    pub fn tol_arc(&self, big_r: f64) -> f64 {
        self.tol_arc_rel * big_r
    }
}

/// Counterclockwise angular length from `from` to `to`, in `[0, 2π)`.
pub fn ccw_span(from: f64, to: f64) -> f64 {
    wrap_angle(to - from)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereLevel {
    pub index: usize,
    pub radius: f64,
    pub base: Point,
}

impl SphereLevel {
    pub fn new(index: usize, big_r: f64, base: &Point) -> Self {
        Self {
            index,
            radius: index as f64 * big_r,
            base: base.clone(),
        }
    }

    pub fn point(&self, body: &crate::ConvexBody, theta: f64) -> Result<Point> {
        sphere_point(body, &self.base, theta, self.radius)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MarkerKind {
    X,
    Y,
}

impl MarkerKind {
    pub fn other(self) -> Self {
        match self {
            MarkerKind::X => MarkerKind::Y,
            MarkerKind::Y => MarkerKind::X,
        }
    }

    fn at(index: usize) -> Self {
        if index % 2 == 0 {
            MarkerKind::X
        } else {
            MarkerKind::Y
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Marker {
    /// In `[0, 2π)`.
    pub angle: f64,
    pub kind: MarkerKind,
    pub level: usize,
    pub ordinal: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcDecomposition {
    pub level: SphereLevel,
    /// Counterclockwise from `x_0`.
    pub markers: Vec<Marker>,
    /// Number of sub-arcs produced from each parent arc (the two halves on level 1).
    pub sub_counts: Vec<usize>,
}

impl ArcDecomposition {
    fn from_angles(level: SphereLevel, angles: Vec<f64>, sub_counts: Vec<usize>) -> Self {
        let markers = angles
            .into_iter()
            .enumerate()
            .map(|(ordinal, angle)| Marker {
                angle: wrap_angle(angle),
                kind: MarkerKind::at(ordinal),
                level: level.index,
                ordinal,
            })
            .collect();
        Self {
            level,
            markers,
            sub_counts,
        }
    }

    /// Arcs between consecutive markers as `(start, span)`.
    pub fn arcs(&self) -> Vec<(f64, f64)> {
        let n = self.markers.len();
        (0..n)
            .map(|k| {
                let a = self.markers[k].angle;
                let span = if n == 1 { TAU } else { ccw_span(a, self.markers[(k + 1) % n].angle) };
                (a, span)
            })
            .collect()
    }

    pub fn x_markers(&self) -> impl Iterator<Item = &Marker> {
        self.markers.iter().filter(|m| m.kind == MarkerKind::X)
    }
}

/// Point on the ray from `o` through `x` at Hilbert distance `t_target` from `o`.
pub fn project_between_levels(body: &crate::ConvexBody, o: &Point, x: &Point, t_target: f64) -> Result<Point> {
    if !(t_target > 0.0) {
        return Err(GeomError::BadParameter(format!("target radius must be > 0, got {t_target}")));
    }
    if !body.is_interior(x) {
        return Err(GeomError::ExteriorPoint(x.to_string()));
    }
    RaySpec::through(body, o, x)?.point(t_target)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum FirstMarker {
    Reached(f64),
    /// Star 1 fails on the sampled arc; carries the sampled maximum of `d(start, ·)`.
    NotReached { max_distance: f64 },
}

/// First angle in `[start, end]` (counterclockwise, `end` unwrapped so that
/// `end > start`) where the distance from the start point reaches `R`.
///
/// Scans a grid of `n_arc` steps and bisects the first bracketing cell; the
/// returned angle is the upper end of the final bracket, so `d ≥ R` there.
pub fn first_marker(
    body: &crate::ConvexBody,
    level: &SphereLevel,
    start: f64,
    end: f64,
    big_r: f64,
    cfg: &ArcConfig,
) -> Result<FirstMarker> {
    let a = level.point(body, start)?;
    let d_at = |theta: f64| -> Result<f64> { distance(body, &a, &level.point(body, theta)?) };
    let n = cfg.n_arc.max(1);
    let step = (end - start) / n as f64;
    let mut max_distance: f64 = 0.0;
    for k in 1..=n {
        let theta = if k == n { end } else { start + step * k as f64 };
        let d = d_at(theta)?;
        if d >= big_r {
            let (mut lo, mut hi) = (start + step * (k - 1) as f64, theta);
            for _ in 0..200 {
                if hi - lo <= cfg.angle_tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if d_at(mid)? >= big_r {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(FirstMarker::Reached(hi));
        }
        max_distance = max_distance.max(d);
    }
    Ok(FirstMarker::NotReached { max_distance })
}

/// Splits the arc `[start, end]` of `level` into an odd number of sub-arcs that
/// satisfy both star conditions. Returns the interior cut angles (unwrapped,
/// strictly between `start` and `end`).
pub fn decompose_arc(
    body: &crate::ConvexBody,
    level: &SphereLevel,
    start: f64,
    end: f64,
    big_r: f64,
    cfg: &ArcConfig,
) -> Result<Vec<f64>> {
    let tol = cfg.tol_arc(big_r);
    let mut cuts: Vec<f64> = Vec::new();
    let mut cur = start;
    loop {
        match first_marker(body, level, cur, end, big_r, cfg)? {
            FirstMarker::Reached(theta) if theta >= end - cfg.angle_tol => break,
            FirstMarker::Reached(theta) => {
                cuts.push(theta);
                cur = theta;
            }
            FirstMarker::NotReached { max_distance } => {
                if cuts.is_empty() {
                    if max_distance >= big_r - tol {
                        break;
                    }
                    return Err(GeomError::Star1Violation {
                        level: level.index,
                        start,
                        end,
                        max_distance,
                        step: (end - start) / cfg.n_arc.max(1) as f64,
                    });
                }
                // the tail arc fails star 1: merge it into its predecessor
                if max_distance < big_r - tol {
                    cuts.pop();
                }
                break;
            }
        }
    }
    if cuts.len() % 2 == 1 {
        cuts.remove(0);
    }
    Ok(cuts)
}

fn star1_error_at(err: GeomError, level: usize) -> GeomError {
    match err {
        GeomError::Star1Violation {
            start,
            end,
            max_distance,
            step,
            ..
        } => GeomError::Star1Violation {
            level,
            start,
            end,
            max_distance,
            step,
        },
        other => other,
    }
}

/// Decomposition of `S_1`: the angle halves `[0, π]` and `[π, 2π]`, each split
/// by [`decompose_arc`].
pub fn initial_decomposition(body: &crate::ConvexBody, o: &Point, big_r: f64, cfg: &ArcConfig) -> Result<ArcDecomposition> {
    if !(big_r > 0.0) {
        return Err(GeomError::BadRadii(format!("need R > 0, got {big_r}")));
    }
    let level = SphereLevel::new(1, big_r, o);
    let mut angles = vec![0.0];
    let mut sub_counts = Vec::with_capacity(2);
    for (a, b) in [(0.0, PI), (PI, TAU)] {
        let cuts = decompose_arc(body, &level, a, b, big_r, cfg).map_err(|e| star1_error_at(e, 1))?;
        sub_counts.push(cuts.len() + 1);
        angles.extend(cuts);
        if b < TAU {
            angles.push(b);
        }
    }
    Ok(ArcDecomposition::from_angles(level, angles, sub_counts))
}

/// Lifts every arc of `dec` to the next level, splits each lift with
/// [`decompose_arc`] and relabels starting from the lift of `y_0`.
pub fn refine_level(body: &crate::ConvexBody, dec: &ArcDecomposition, big_r: f64, cfg: &ArcConfig) -> Result<ArcDecomposition> {
    let level = SphereLevel::new(dec.level.index + 1, big_r, &dec.level.base);
    let mut seq = Vec::new();
    let mut sub_counts = Vec::with_capacity(dec.markers.len());
    let mut y0_at = 0;
    for (k, (start, span)) in dec.arcs().into_iter().enumerate() {
        if k == 1 {
            y0_at = seq.len();
        }
        seq.push(start);
        let cuts = decompose_arc(body, &level, start, start + span, big_r, cfg).map_err(|e| star1_error_at(e, level.index))?;
        sub_counts.push(cuts.len() + 1);
        seq.extend(cuts);
    }
    seq.rotate_left(y0_at);
    Ok(ArcDecomposition::from_angles(level, seq, sub_counts))
}

/// A closed cover piece in polar form about `o`: angles `[start, start + span]`
/// (counterclockwise) and Hilbert radii `[inner, outer]`. Level 0 is the ball
/// `B(o, R)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverPiece {
    pub level: usize,
    pub ordinal: usize,
    pub start_angle: f64,
    pub end_angle: f64,
    pub span: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl CoverPiece {
    pub fn is_central(&self) -> bool {
        self.level == 0
    }

    /// Membership given the polar coordinates `(t, θ)` of a point about `o`.
    pub fn contains_polar(&self, t: f64, theta: f64) -> bool {
        if self.is_central() {
            return t <= self.outer_radius;
        }
        t >= self.inner_radius && t <= self.outer_radius && ccw_span(self.start_angle, theta) <= self.span
    }

    pub fn contains(&self, body: &crate::ConvexBody, o: &Point, p: &Point) -> Result<bool> {
        let (t, theta) = polar(body, o, p)?;
        Ok(self.contains_polar(t, theta))
    }

    /// Samples of the four boundary curves, `N/4` steps each at fractions `k/(N/4)`,
    /// so that doubling `N` only adds points. The central piece uses `N`
    /// uniform angles on `S(o, R)`.
    pub fn boundary_samples(&self, body: &crate::ConvexBody, o: &Point, n: usize) -> Result<Vec<Point>> {
        if self.is_central() {
            return (0..n)
                .map(|k| sphere_point(body, o, TAU * k as f64 / n as f64, self.outer_radius))
                .collect();
        }
        let m = (n / 4).max(1);
        let mut out = Vec::with_capacity(4 * (m + 1));
        for k in 0..=m {
            let f = k as f64 / m as f64;
            let theta = self.start_angle + self.span * f;
            let t = self.inner_radius + (self.outer_radius - self.inner_radius) * f;
            out.push(sphere_point(body, o, theta, self.inner_radius)?);
            out.push(sphere_point(body, o, theta, self.outer_radius)?);
            out.push(sphere_point(body, o, self.start_angle, t)?);
            out.push(sphere_point(body, o, self.start_angle + self.span, t)?);
        }
        Ok(out)
    }
}

/// `(d(o, p), angle of p about o)`; the angle is 0 at `p = o`.
pub fn polar(body: &crate::ConvexBody, o: &Point, p: &Point) -> Result<(f64, f64)> {
    let t = distance(body, o, p)?;
    let theta = if t == 0.0 { 0.0 } else { p.angle_from(o) };
    Ok((t, theta))
}

#[derive(Clone, Debug, Serialize)]
pub struct Cover {
    pub base: Point,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub levels: Vec<ArcDecomposition>,
    pub pieces: Vec<CoverPiece>,
    pub config: ArcConfig,
}

impl Cover {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Hilbert radius covered by the pieces.
    pub fn reach(&self) -> f64 {
        (self.depth() + 1) as f64 * self.big_r
    }

    /// Indices into `pieces` of the pieces containing the polar point `(t, θ)`.
    pub fn pieces_at(&self, t: f64, theta: f64) -> impl Iterator<Item = usize> + '_ {
        let lo = ((t / self.big_r).floor() as usize).saturating_sub(1);
        let hi = (t / self.big_r).ceil() as usize;
        self.pieces
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.level >= lo && p.level <= hi && p.contains_polar(t, theta))
            .map(|(k, _)| k)
    }
}

fn pieces_of_level(dec: &ArcDecomposition, big_r: f64) -> Vec<CoverPiece> {
    let xs: Vec<f64> = dec.x_markers().map(|m| m.angle).collect();
    let n = xs.len();
    let inner = dec.level.radius;
    (0..n)
        .map(|j| {
            let start = xs[j];
            let end = xs[(j + 1) % n];
            let span = if n == 1 { TAU } else { ccw_span(start, end) };
            CoverPiece {
                level: dec.level.index,
                ordinal: j,
                start_angle: start,
                end_angle: end,
                span,
                inner_radius: inner,
                outer_radius: inner + big_r,
            }
        })
        .collect()
}

/// Builds level decompositions `S_1 … S_levels` and the cover pieces
/// `U_{0,0} = B(o, R)` and `U_{i,j}`, `1 ≤ i ≤ levels`.
pub fn build_cover(body: &crate::ConvexBody, o: &Point, big_r: f64, levels: usize, cfg: &ArcConfig) -> Result<Cover> {
    if levels == 0 {
        return Err(GeomError::BadParameter("need at least one level".into()));
    }
    if !body.is_interior(o) {
        return Err(GeomError::ExteriorBase);
    }
    let mut decs = vec![initial_decomposition(body, o, big_r, cfg)?];
    while decs.len() < levels {
        let next = refine_level(body, decs.last().expect("non-empty"), big_r, cfg)?;
        decs.push(next);
    }
    let mut pieces = vec![CoverPiece {
        level: 0,
        ordinal: 0,
        start_angle: 0.0,
        end_angle: 0.0,
        span: TAU,
        inner_radius: 0.0,
        outer_radius: big_r,
    }];
    for dec in &decs {
        pieces.extend(pieces_of_level(dec, big_r));
    }
    log::debug!(
        "cover: {} levels, {} pieces, markers per level {:?}",
        decs.len(),
        pieces.len(),
        decs.iter().map(|d| d.markers.len()).collect::<Vec<_>>()
    );
    Ok(Cover {
        base: o.clone(),
        big_r,
        levels: decs,
        pieces,
        config: cfg.clone(),
    })
}

fn max_pairwise(body: &crate::ConvexBody, pts: &[Point]) -> Result<f64> {
    let mut best: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            best = best.max(distance(body, p, q)?);
        }
    }
    Ok(best)
}

/// Largest pairwise distance among the boundary samples of a piece.
pub fn piece_diameter(body: &crate::ConvexBody, o: &Point, piece: &CoverPiece, n: usize) -> Result<f64> {
    if n < 64 {
        return Err(GeomError::BadParameter(format!("need at least 64 boundary samples, got {n}")));
    }
    max_pairwise(body, &piece.boundary_samples(body, o, n)?)
}

/// Angular interval `(start, span)` about `o` swept by `B(x, r)`, estimated
/// from `n` samples of the ball boundary.
pub fn angular_footprint(body: &crate::ConvexBody, o: &Point, x: &Point, r: f64, n: usize) -> Result<(f64, f64)> {
    if distance(body, o, x)? <= r {
        return Err(GeomError::BadParameter("ball contains the base point".into()));
    }
    let axis = x.angle_from(o);
    let ball = ball_boundary(body, x, r, n)?;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in &ball.samples {
        let rel = wrap_angle(p.angle_from(o) - axis + PI) - PI;
        lo = lo.min(rel);
        hi = hi.max(rel);
    }
    Ok((axis + lo, hi - lo))
}

/// Sampled Hilbert diameter of the angular footprint of `B(x, r)` on `S(o, t)`.
pub fn footprint_diameter(body: &crate::ConvexBody, o: &Point, x: &Point, r: f64, t: f64, n: usize) -> Result<f64> {
    let (start, span) = angular_footprint(body, o, x, r, n)?;
    let pts = (0..=n)
        .map(|k| sphere_point(body, o, start + span * k as f64 / n as f64, t))
        .collect::<Result<Vec<_>>>()?;
    max_pairwise(body, &pts)
}

/// Indices of the pieces met by the closed ball `B(x, r)`.
///
/// A piece is never contained in an `r`-ball when `R > 4r`, so it meets the
/// ball iff it meets the ball's boundary or holds the center. The boundary is
/// sampled at `n` points and each sample is located exactly by polar coordinates.
pub fn pieces_meeting_ball(body: &crate::ConvexBody, cover: &Cover, x: &Point, r: f64, n: usize) -> Result<Vec<usize>> {
    let o = &cover.base;
    let ball = ball_boundary(body, x, r, n)?;
    let mut hit: Vec<usize> = Vec::new();
    for p in std::iter::once(x).chain(ball.samples.iter()) {
        let (t, theta) = polar(body, o, p)?;
        for k in cover.pieces_at(t, theta) {
            if !hit.contains(&k) {
                hit.push(k);
            }
        }
    }
    hit.sort_unstable();
    Ok(hit)
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityReport {
    pub r: f64,
    pub trials: usize,
    pub ball_samples: usize,
    pub max_count: usize,
    /// `histogram[k]` = number of trial balls meeting exactly `k` pieces.
    pub histogram: Vec<usize>,
    pub worst_center: Option<Point>,
}

/// Counts the pieces met by random closed `r`-balls inside the covered region.
///
/// Even trials draw the center uniformly in polar coordinates; odd trials
/// place it near a random marker and level circle, where pieces meet.
pub fn multiplicity_probe(
    body: &crate::ConvexBody,
    cover: &Cover,
    r: f64,
    trials: usize,
    seed: u64,
    ball_samples: usize,
) -> Result<MultiplicityReport> {
    let big_r = cover.big_r;
    if !(r > 0.0) || big_r <= 4.0 * r {
        return Err(GeomError::BadRadii(format!("need R > 4r > 0, got R = {big_r}, r = {r}")));
    }
    let o = &cover.base;
    let t_max = cover.reach() - r;
    let mut rng = rng(seed);
    let mut histogram = vec![0usize; 4];
    let mut max_count = 0;
    let mut worst_center = None;
    for trial in 0..trials {
        let (t, theta) = if trial % 2 == 0 {
            (rng.random_range(0.0..t_max), rng.random_range(0.0..TAU))
        } else {
            let dec = &cover.levels[rng.random_range(0..cover.levels.len())];
            let k = rng.random_range(0..dec.markers.len());
            let arcs = dec.arcs();
            let prev = arcs[(k + arcs.len() - 1) % arcs.len()].1;
            let width = 0.25 * prev.min(arcs[k].1);
            let t = dec.level.radius + rng.random_range(-r..r);
            (t.min(t_max), dec.markers[k].angle + rng.random_range(-width..=width))
        };
        let x = if t > 0.0 { sphere_point(body, o, theta, t)? } else { o.clone() };
        let count = pieces_meeting_ball(body, cover, &x, r, ball_samples)?.len();
        if count >= histogram.len() {
            histogram.resize(count + 1, 0);
        }
        histogram[count] += 1;
        if count > max_count {
            max_count = count;
            worst_center = Some(x);
        }
    }
    Ok(MultiplicityReport {
        r,
        trials,
        ball_samples,
        max_count,
        histogram,
        worst_center,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ArcAudit {
    pub level: usize,
    pub index: usize,
    pub start_angle: f64,
    pub span: f64,
    /// Sampled `max d(start, ·)` over the arc.
    pub max_from_start: f64,
    pub diameter: f64,
    pub star1: bool,
    pub star2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelAudit {
    pub level: usize,
    pub markers: usize,
    pub even_count: bool,
    pub alternating: bool,
    pub sub_counts_odd: bool,
    /// Every marker of the previous level lifts to a marker of the other kind.
    pub admissible: bool,
    pub arcs: Vec<ArcAudit>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionAudit {
    #[serde(rename = "R")]
    pub big_r: f64,
    pub tol_arc: f64,
    pub star_samples: usize,
    /// Largest Hilbert step between consecutive audit samples on any arc.
    pub grid_resolution: f64,
    pub levels: Vec<LevelAudit>,
    pub passed: bool,
}

fn admissible_over(prev: &ArcDecomposition, dec: &ArcDecomposition) -> bool {
    prev.markers.iter().all(|m| {
        dec.markers
            .iter()
            .any(|c| c.angle == m.angle && c.kind == m.kind.other())
    })
}

/// Checks star 1, star 2, parity, alternation and admissibility on every level.
pub fn audit_decomposition(body: &crate::ConvexBody, decs: &[ArcDecomposition], big_r: f64, cfg: &ArcConfig) -> Result<DecompositionAudit> {
    let tol = cfg.tol_arc(big_r);
    let n = cfg.star_samples.max(2);
    let mut grid_resolution: f64 = 0.0;
    let mut levels = Vec::with_capacity(decs.len());
    for (li, dec) in decs.iter().enumerate() {
        let mut arcs = Vec::new();
        for (index, (start, span)) in dec.arcs().into_iter().enumerate() {
            let pts = (0..=n)
                .map(|k| dec.level.point(body, start + span * k as f64 / n as f64))
                .collect::<Result<Vec<_>>>()?;
            let mut max_from_start: f64 = 0.0;
            for w in pts.windows(2) {
                grid_resolution = grid_resolution.max(distance(body, &w[0], &w[1])?);
            }
            for p in &pts[1..] {
                max_from_start = max_from_start.max(distance(body, &pts[0], p)?);
            }
            let diameter = max_pairwise(body, &pts)?;
            arcs.push(ArcAudit {
                level: dec.level.index,
                index,
                start_angle: start,
                span,
                max_from_start,
                diameter,
                star1: max_from_start >= big_r - tol,
                star2: diameter <= 4.0 * big_r + tol,
            });
        }
        let total: f64 = dec.arcs().iter().map(|a| a.1).sum();
        let alternating = dec.markers.iter().enumerate().all(|(k, m)| m.kind == MarkerKind::at(k))
            && dec.arcs().iter().all(|a| a.1 > 0.0)
            && (total - TAU).abs() <= 1e-9;
        levels.push(LevelAudit {
            level: dec.level.index,
            markers: dec.markers.len(),
            even_count: dec.markers.len() % 2 == 0,
            alternating,
            sub_counts_odd: dec.sub_counts.iter().all(|c| c % 2 == 1),
            admissible: li == 0 || admissible_over(&decs[li - 1], dec),
            arcs,
        });
    }
    let passed = levels.iter().all(|l| {
        l.even_count && l.alternating && l.sub_counts_odd && l.admissible && l.arcs.iter().all(|a| a.star1 && a.star2)
    });
    Ok(DecompositionAudit {
        big_r,
        tol_arc: tol,
        star_samples: n,
        grid_resolution,
        levels,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PieceDiameter {
    pub level: usize,
    pub ordinal: usize,
    pub diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverAudit {
    pub decomposition: DecompositionAudit,
    pub diameter_samples: usize,
    pub diameter_bound: f64,
    pub piece_diameters: Vec<PieceDiameter>,
    pub max_piece_diameter: f64,
    pub multiplicity: MultiplicityReport,
    pub diameters_ok: bool,
    pub multiplicity_ok: bool,
    pub passed: bool,
}

/// Settings for [`audit_cover`].
#[derive(Clone, Debug, Serialize)]
pub struct CoverAuditConfig {
    pub r: f64,
    pub trials: usize,
    pub seed: u64,
    pub ball_samples: usize,
    pub diameter_samples: usize,
}

/// Decomposition audit, piece diameters against `10R` and the multiplicity probe against 3.
pub fn audit_cover(body: &crate::ConvexBody, cover: &Cover, cfg: &CoverAuditConfig) -> Result<CoverAudit> {
    let multiplicity = multiplicity_probe(body, cover, cfg.r, cfg.trials, cfg.seed, cfg.ball_samples)?;
    let decomposition = audit_decomposition(body, &cover.levels, cover.big_r, &cover.config)?;
    let piece_diameters = cover
        .pieces
        .iter()
        .map(|p| {
            Ok(PieceDiameter {
                level: p.level,
                ordinal: p.ordinal,
                diameter: piece_diameter(body, &cover.base, p, cfg.diameter_samples)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_piece_diameter = piece_diameters.iter().map(|p| p.diameter).fold(0.0, f64::max);
    let diameter_bound = 10.0 * cover.big_r + cover.config.tol_arc(cover.big_r);
    let diameters_ok = max_piece_diameter <= diameter_bound;
    let multiplicity_ok = multiplicity.max_count <= 3;
    Ok(CoverAudit {
        passed: decomposition.passed && diameters_ok && multiplicity_ok,
        decomposition,
        diameter_samples: cfg.diameter_samples,
        diameter_bound,
        piece_diameters,
        max_piece_diameter,
        multiplicity,
        diameters_ok,
        multiplicity_ok,
    })
}
