//! Bounded coarse geometry and the corona dichotomy, checked numerically.
//!
//! All stochastic operations take an explicit seed and are reproducible.

use rand::Rng;
use serde::Serialize;

use crate::convex_domain::{ConvexBody, Direction, Membership, Point};
use crate::error::{GeomError, Result};
use crate::hilbert_metric::{distance, sphere_point, RaySpec};
use crate::sampling::{random_direction, random_interior, rng, BallSampler};

/// `D = (e^r - 1) / (e^{2R} - 1)`, the scale factor that maps `B_R` into `B(x, r)`.
pub fn contraction_constant(r: f64, big_r: f64) -> Result<f64> {
    if !(r > 0.0 && big_r > 0.0) {
        return Err(GeomError::BadRadii(format!("need r > 0 and R > 0, got r = {r}, R = {big_r}")));
    }
    if r >= 2.0 * big_r {
        return Err(GeomError::BadRadii(format!("need r < 2R, got r = {r}, R = {big_r}")));
    }
    Ok(r.exp_m1() / (2.0 * big_r).exp_m1())
}

/// `x + D (y - x)`.
pub fn contract(x: &Point, factor: f64, y: &Point) -> Point {
    x.lerp(y, factor)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub factor: f64,
    pub samples: usize,
    /// `max_y d(x, contract(x, D, y)) - r`; `-r` when no samples were drawn.
    pub max_violation: f64,
}

/// Samples `y ∈ B(ball_center, R)` and measures how far `x + D (y - x)` lands
/// outside `B(x, r)`.
pub fn verify_contraction(
    body: &ConvexBody,
    ball_center: &Point,
    big_r: f64,
    x: &Point,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<ContractionReport> {
    let factor = contraction_constant(r, big_r)?;
    if distance(body, ball_center, x)? + r > big_r + 1e-9 {
        return Err(GeomError::BallNotContained);
    }
    let mut max_violation = -r;
    if samples > 0 {
        let sampler = BallSampler::new(body, ball_center, big_r)?;
        let mut rng = rng(seed);
        for _ in 0..samples {
            let y = sampler.sample(&mut rng);
            let image = contract(x, factor, &y);
            max_violation = max_violation.max(distance(body, x, &image)? - r);
        }
    }
    Ok(ContractionReport {
        factor,
        samples,
        max_violation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PackingReport {
    pub center: Point,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub epsilon: f64,
    /// Points in the greedy `2ε`-separated set, the center included.
    pub count: usize,
    /// `1 / D^n` with `D = contraction_constant(ε, R + ε)`.
    pub bound: f64,
    pub trials: usize,
}

/// Greedy `2ε`-separated subset of `B(center, R)`, seeded with the center itself.
pub fn greedy_packing(
    body: &ConvexBody,
    center: &Point,
    big_r: f64,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<PackingReport> {
    if !(big_r > 0.0 && epsilon > 0.0) {
        return Err(GeomError::BadRadii(format!(
            "need R > 0 and epsilon > 0, got R = {big_r}, epsilon = {epsilon}"
        )));
    }
    let factor = contraction_constant(epsilon, big_r + epsilon)?;
    let bound = factor.powi(body.dim() as i32).recip();
    let sampler = BallSampler::new(body, center, big_r)?;
    let mut rng = rng(seed);
    let mut chosen = vec![center.clone()];
    for _ in 0..trials {
        let p = sampler.sample(&mut rng);
        let mut separated = true;
        for q in &chosen {
            if distance(body, &p, q)? <= 2.0 * epsilon {
                separated = false;
                break;
            }
        }
        if separated {
            chosen.push(p);
        }
    }
    Ok(PackingReport {
        center: center.clone(),
        big_r,
        epsilon,
        count: chosen.len(),
        bound,
        trials,
    })
}

/// Draws a pair `(x, y)` with `d(o, x) ∈ [rho, rho + 1]` and `d(x, y) ≤ c`.
///
/// `x` lies on a ray from `o` (random direction unless `directions` is given).
/// `y` moves from `x` by a random Hilbert step in `[0, c]`, along a random
/// direction for even draws and, in the plane, along the tangent of the
/// Hilbert sphere through `x` for odd draws. Tangential moves are where flat
/// boundary pieces show up; uniformly random directions almost never find them.
fn probe_pair(
    body: &ConvexBody,
    o: &Point,
    rho: f64,
    c: f64,
    directions: Option<&[Direction]>,
    draw: usize,
    rng: &mut impl Rng,
) -> Result<(Point, Point)> {
    let dim = body.dim();
    let t = rho + rng.random_range(0.0..1.0);
    let (x, theta) = match directions {
        Some(dirs) if !dirs.is_empty() => {
            let u = &dirs[rng.random_range(0..dirs.len())];
            (RaySpec::new(body, o, u)?.point(t)?, None)
        }
        _ if dim == 2 => {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            (sphere_point(body, o, theta, t.max(f64::MIN_POSITIVE))?, Some(theta))
        }
        _ => (RaySpec::new(body, o, &random_direction(rng, dim))?.point(t)?, None),
    };
    let step = if c > 0.0 { rng.random_range(0.0..=c) } else { 0.0 };
    if step == 0.0 {
        return Ok((x.clone(), x));
    }
    let dir = if draw % 2 == 1 && dim == 2 {
        let theta = theta.unwrap_or_else(|| x.angle_from(o));
        let h = 1e-6;
        let ahead = sphere_point(body, o, theta + h, t)?;
        let behind = sphere_point(body, o, theta - h, t)?;
        let tangent = Direction::between(&behind, &ahead)?;
        if rng.random_bool(0.5) {
            tangent
        } else {
            tangent.reversed()
        }
    } else {
        random_direction(rng, dim)
    };
    let y = RaySpec::new(body, &x, &dir)?.point(step)?;
    Ok((x, y))
}

#[derive(Clone, Debug, Serialize)]
pub struct CoronaProbeReport {
    pub delta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub probe_radii: Vec<f64>,
    pub sup_euclidean_gap: Vec<f64>,
    pub samples: usize,
    /// Gap at the largest probe radius is below `delta`.
    pub below_delta_at_largest: bool,
    /// Gaps are non-increasing along the radii (reported, not asserted).
    pub non_increasing: bool,
}

/// Supremum of `|xy|` over sampled pairs with `d(x, y) ≤ C` at growing distance from `o`.
pub fn corona_probe(
    body: &ConvexBody,
    o: &Point,
    delta: f64,
    c: f64,
    radii: &[f64],
    samples: usize,
    seed: u64,
    directions: Option<&[Direction]>,
) -> Result<CoronaProbeReport> {
    if !(c >= 0.0) || radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(GeomError::BadParameter("C and probe radii must be non-negative".into()));
    }
    let mut gaps = Vec::with_capacity(radii.len());
    for (k, rho) in radii.iter().enumerate() {
        let mut rng = rng(seed.wrapping_add(k as u64));
        let mut sup: f64 = 0.0;
        for draw in 0..samples {
            let (x, y) = probe_pair(body, o, *rho, c, directions, draw, &mut rng)?;
            sup = sup.max(x.dist(&y));
        }
        gaps.push(sup);
    }
    let below = gaps.last().is_some_and(|g| *g < delta);
    let non_increasing = gaps.windows(2).all(|w| w[1] <= w[0]);
    Ok(CoronaProbeReport {
        delta,
        c,
        probe_radii: radii.to_vec(),
        sup_euclidean_gap: gaps,
        samples,
        below_delta_at_largest: below,
        non_increasing,
    })
}

/// `log(|ξβ| |ηα| / (|ξα| |ηβ|))` for a boundary segment `[α, β]` and points
/// `ξ, η` strictly inside it with `|αξ| < |αη|`.
pub fn flat_boundary_ray_bound(body: &ConvexBody, alpha: &Point, beta: &Point, xi: &Point, eta: &Point) -> Result<f64> {
    let on_boundary = (0..=16).all(|k| body.classify(&alpha.lerp(beta, k as f64 / 16.0)) == Membership::Boundary);
    if alpha.dist(beta) <= crate::convex_domain::POINT_TOL || !on_boundary {
        return Err(GeomError::NotOnBoundary);
    }
    let len = alpha.dist(beta);
    let span = beta - alpha;
    for p in [xi, eta] {
        let rel = p - alpha;
        let s = rel.dot(&span) / (len * len);
        let off = (&rel - &(&span * s)).norm();
        if off > 1e-9 * len || !(s > 0.0 && s < 1.0) {
            return Err(GeomError::NotOnBoundary);
        }
    }
    if !(alpha.dist(xi) < alpha.dist(eta)) {
        return Err(GeomError::BadOrder);
    }
    Ok((xi.dist(beta) * eta.dist(alpha) / (xi.dist(alpha) * eta.dist(beta))).ln())
}

/// Pairs `(x, y)` with `x` on `[o, ξ)` at Hilbert distance `t` from `o` and `y`
/// on `[o, η)` such that `xy` is parallel to `ξη`.
pub fn parallel_pairs(body: &ConvexBody, o: &Point, xi: &Point, eta: &Point, ts: &[f64]) -> Result<Vec<(Point, Point)>> {
    let ray = RaySpec::through(body, o, xi)?;
    let reach = o.dist(xi);
    ts.iter()
        .map(|t| {
            let x = ray.point(*t)?;
            let lambda = o.dist(&x) / reach;
            Ok((x, o.lerp(eta, lambda)))
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatEdgeReport {
    pub bound: f64,
    pub max_distance: f64,
    pub max_radius: f64,
    pub pairs: usize,
}

/// Evaluates `d(x, y)` along [`parallel_pairs`] for `ts` and compares with the
/// [`flat_boundary_ray_bound`].
pub fn flat_edge_check(
    body: &ConvexBody,
    o: &Point,
    edge: (&Point, &Point),
    xi: &Point,
    eta: &Point,
    ts: &[f64],
) -> Result<FlatEdgeReport> {
    let bound = flat_boundary_ray_bound(body, edge.0, edge.1, xi, eta)?;
    let pairs = parallel_pairs(body, o, xi, eta, ts)?;
    let mut max_distance: f64 = 0.0;
    for (x, y) in &pairs {
        max_distance = max_distance.max(distance(body, x, y)?);
    }
    Ok(FlatEdgeReport {
        bound,
        max_distance,
        max_radius: ts.iter().cloned().fold(0.0, f64::max),
        pairs: pairs.len(),
    })
}

/// Sampled `sup |f(x) - f(y)|` over pairs with `d(x, y) ≤ C` and `d(o, x) ∈ [rho, rho + 1]`.
pub fn higson_defect(
    body: &ConvexBody,
    o: &Point,
    f: &dyn Fn(&Point) -> f64,
    c: f64,
    rho: f64,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let mut rng = rng(seed);
    let mut sup: f64 = 0.0;
    for draw in 0..samples {
        let (x, y) = probe_pair(body, o, rho, c, None, draw, &mut rng)?;
        sup = sup.max((f(&x) - f(&y)).abs());
    }
    Ok(sup)
}

/// `sup |f(x) - f(y)|` over explicitly constructed pairs.
pub fn higson_defect_on_pairs(f: &dyn Fn(&Point) -> f64, pairs: &[(Point, Point)]) -> f64 {
    pairs.iter().map(|(x, y)| (f(x) - f(y)).abs()).fold(0.0, f64::max)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClearanceReport {
    pub clearance: f64,
    pub samples: usize,
    pub hilbert_diameter: f64,
}

/// Hilbert diameter of a random sample of points at Euclidean clearance `eps`
/// from the boundary.
pub fn clearance_set_diameter(body: &ConvexBody, eps: f64, samples: usize, seed: u64) -> Result<ClearanceReport> {
    if !(eps > 0.0) {
        return Err(GeomError::BadParameter(format!("clearance must be > 0, got {eps}")));
    }
    let mut rng = rng(seed);
    let mut pts = Vec::with_capacity(samples);
    let mut attempts = 0usize;
    while pts.len() < samples {
        attempts += 1;
        if attempts > 1000 * samples.max(1) {
            return Err(GeomError::BadParameter(format!("no interior points at clearance {eps}")));
        }
        let p = random_interior(body, &mut rng);
        if body.signed_distance(&p) <= -eps {
            pts.push(p);
        }
    }
    let mut diam: f64 = 0.0;
    for (i, p) in pts.iter().enumerate() {
        for q in &pts[i + 1..] {
            diam = diam.max(distance(body, p, q)?);
        }
    }
    Ok(ClearanceReport {
        clearance: eps,
        samples,
        hilbert_diameter: diam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_domain::BodySpec;

    fn disk() -> ConvexBody {
        ConvexBody::new(&BodySpec::unit_disk()).unwrap()
    }

    fn square() -> ConvexBody {
        ConvexBody::new(&BodySpec::square(1.0)).unwrap()
    }

    fn origin() -> Point {
        Point::xy(0.0, 0.0)
    }

    #[test]
    fn contraction_constant_examples() {
        let l2 = 2f64.ln();
        assert!((contraction_constant(l2, l2).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let e = std::f64::consts::E;
        assert!((contraction_constant(1.0, 1.0).unwrap() - 1.0 / (e + 1.0)).abs() < 1e-15);
        assert!(contraction_constant(1e-12, 1.0).unwrap() < 1e-12);
        assert!(matches!(contraction_constant(2.0, 1.0), Err(GeomError::BadRadii(_))));
        assert!(matches!(contraction_constant(0.0, 1.0), Err(GeomError::BadRadii(_))));
    }

    #[test]
    fn contraction_constant_monotone() {
        let mut prev = 0.0;
        for k in 1..20 {
            let d = contraction_constant(0.1 * k as f64, 1.0).unwrap();
            assert!(d > prev && d < 1.0);
            prev = d;
        }
        let mut prev = 1.0;
        for k in 1..20 {
            let d = contraction_constant(0.5, 0.5 + 0.3 * k as f64).unwrap();
            assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn contract_examples() {
        let p = contract(&origin(), 1.0 / 3.0, &Point::xy(3.0, 0.0));
        assert!(p.dist(&Point::xy(1.0, 0.0)) < 1e-15);
        let x = Point::xy(0.3, 0.4);
        assert_eq!(contract(&x, 0.7, &x), x);
        assert_eq!(contract(&Point::xy(1.0, 1.0), 0.5, &Point::xy(3.0, 3.0)), Point::xy(2.0, 2.0));
    }

    #[test]
    fn contraction_holds_on_disk_concentric() {
        let rep = verify_contraction(&disk(), &origin(), 2.0, &origin(), 1.0, 1000, 7).unwrap();
        assert!(rep.max_violation <= 1e-9, "{rep:?}");
    }

    #[test]
    fn contraction_vacuous_without_samples() {
        let rep = verify_contraction(&disk(), &origin(), 2.0, &origin(), 1.0, 0, 7).unwrap();
        assert_eq!(rep.max_violation, -1.0);
    }

    #[test]
    fn contraction_holds_on_square_off_center() {
        let sq = square();
        let x = RaySpec::new(&sq, &origin(), &Direction::from_angle(0.7)).unwrap().point(2.0).unwrap();
        let rep = verify_contraction(&sq, &origin(), 3.0, &x, 0.5, 500, 11).unwrap();
        assert!(rep.max_violation <= 1e-9, "{rep:?}");
    }

    #[test]
    fn contraction_requires_nested_balls() {
        let x = Point::xy(0.6, 0.0);
        assert_eq!(
            verify_contraction(&disk(), &origin(), 1.0, &x, 0.9, 10, 0).unwrap_err(),
            GeomError::BallNotContained
        );
    }

    #[test]
    fn packing_with_large_separation_is_single_point() {
        let rep = greedy_packing(&disk(), &origin(), 1.0, 1.0, 500, 3).unwrap();
        assert_eq!(rep.count, 1);
    }

    #[test]
    fn packing_is_deterministic_and_bounded() {
        let a = greedy_packing(&disk(), &origin(), 2.0, 0.25, 2000, 5).unwrap();
        let b = greedy_packing(&disk(), &origin(), 2.0, 0.25, 2000, 5).unwrap();
        assert_eq!(a.count, b.count);
        assert!(a.count as f64 <= a.bound);
        assert!(a.count > 1);
    }

    #[test]
    fn corona_probe_with_zero_c_has_zero_gap() {
        let rep = corona_probe(&disk(), &origin(), 0.1, 0.0, &[2.0, 4.0], 50, 1, None).unwrap();
        assert!(rep.sup_euclidean_gap.iter().all(|g| *g == 0.0));
    }

    #[test]
    fn corona_probe_disk_gap_shrinks() {
        let radii: Vec<f64> = (1..=8).map(|k| 2.0 * k as f64).collect();
        let rep = corona_probe(&disk(), &origin(), 0.1, 1.0, &radii, 400, 2, None).unwrap();
        assert!(rep.below_delta_at_largest, "{rep:?}");
        assert!(rep.sup_euclidean_gap[0] > rep.sup_euclidean_gap[7]);
    }

    #[test]
    fn corona_probe_square_toward_top_edge_stays_open() {
        let dirs: Vec<Direction> = [-0.5, 0.0, 0.5]
            .iter()
            .map(|x| Direction::new(&Point::xy(*x, 1.0)).unwrap())
            .collect();
        let radii: Vec<f64> = (1..=8).map(|k| 2.0 * k as f64).collect();
        let rep = corona_probe(&square(), &origin(), 0.1, 1.0, &radii, 400, 2, Some(&dirs)).unwrap();
        let g0 = rep.sup_euclidean_gap.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(g0 > 0.1, "{rep:?}");
    }

    #[test]
    fn flat_bound_on_square_top_edge() {
        let b = flat_boundary_ray_bound(
            &square(),
            &Point::xy(-1.0, 1.0),
            &Point::xy(1.0, 1.0),
            &Point::xy(-0.5, 1.0),
            &Point::xy(0.5, 1.0),
        )
        .unwrap();
        assert!((b - 9f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn flat_bound_rejects_bad_input() {
        let (a, b) = (Point::xy(-1.0, 1.0), Point::xy(1.0, 1.0));
        let xi = Point::xy(0.2, 1.0);
        assert_eq!(
            flat_boundary_ray_bound(&square(), &a, &b, &xi, &xi).unwrap_err(),
            GeomError::BadOrder
        );
        assert_eq!(
            flat_boundary_ray_bound(&disk(), &Point::xy(-1.0, 0.0), &Point::xy(1.0, 0.0), &xi, &xi).unwrap_err(),
            GeomError::NotOnBoundary
        );
    }

    #[test]
    fn parallel_pairs_respect_flat_bound() {
        let sq = square();
        let ts: Vec<f64> = (0..100).map(|k| 0.2 * k as f64 + 0.01).collect();
        let rep = flat_edge_check(
            &sq,
            &origin(),
            (&Point::xy(-1.0, 1.0), &Point::xy(1.0, 1.0)),
            &Point::xy(-0.5, 1.0),
            &Point::xy(0.5, 1.0),
            &ts,
        )
        .unwrap();
        assert!(rep.max_distance <= rep.bound + 1e-9, "{rep:?}");
        assert!(rep.max_distance > rep.bound - 1e-3);
    }

    #[test]
    fn higson_defect_constant_is_zero() {
        let d = higson_defect(&disk(), &origin(), &|_| 4.0, 1.0, 3.0, 100, 0).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn higson_defect_decays_on_disk() {
        let f = |p: &Point| p.x() / p.norm().max(1e-300);
        let near = higson_defect(&disk(), &origin(), &f, 1.0, 1.0, 400, 3).unwrap();
        let far = higson_defect(&disk(), &origin(), &f, 1.0, 12.0, 400, 3).unwrap();
        assert!(far < near && far < 0.05, "near {near}, far {far}");
    }

    #[test]
    fn higson_defect_on_square_parallel_pairs_stays_large() {
        let sq = square();
        let f = |p: &Point| p.x();
        let (xi, eta) = (Point::xy(-0.5, 1.0), Point::xy(0.5, 1.0));
        for rho in [2.0, 6.0, 12.0, 18.0] {
            let pairs = parallel_pairs(&sq, &origin(), &xi, &eta, &[rho]).unwrap();
            let defect = higson_defect_on_pairs(&f, &pairs);
            assert!(defect >= (f(&xi) - f(&eta)).abs() / 2.0);
        }
    }

    #[test]
    fn clearance_sets_have_finite_diameter() {
        let rep = clearance_set_diameter(&square(), 0.1, 100, 1).unwrap();
        assert!(rep.hilbert_diameter.is_finite() && rep.hilbert_diameter > 0.0);
        let diam = square().diameter();
        let bound = 2.0 * (diam / 0.1 * (1.0 + diam / 0.1)).ln();
        assert!(rep.hilbert_diameter <= bound);
    }
}
