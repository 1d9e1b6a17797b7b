//! Seeded random sampling of points, directions and Hilbert balls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex_domain::{BodySpec, ConvexBody, Direction, Point};
use crate::error::{GeomError, Result};
use crate::hilbert_metric::{ball_boundary, distance};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random unit vector in `dim` dimensions.
pub fn random_direction(rng: &mut impl Rng, dim: usize) -> Direction {
    if dim == 2 {
        return Direction::from_angle(rng.random_range(0.0..std::f64::consts::TAU));
    }
    loop {
        let v = Point::new((0..dim).map(|_| rng.random_range(-1.0..1.0)));
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return Direction::new(&v).expect("non-zero");
        }
    }
}

/// Uniform point of the body by rejection from its bounding box.
pub fn random_interior(body: &ConvexBody, rng: &mut impl Rng) -> Point {
    let (lo, hi) = body.bounding_box();
    loop {
        let p = Point::new(
            lo.coords()
                .iter()
                .zip(hi.coords())
                .map(|(a, b)| rng.random_range(*a..*b)),
        );
        if body.is_interior(&p) {
            return p;
        }
    }
}

/// Convex `n`-gon inscribed in the unit circle. Vertex angles are jittered
/// from the regular ones, so each gap lies between 0.4 and 1.6 times `2π / n`
/// and the origin stays inside.
pub fn random_polygon(rng: &mut impl Rng, n: usize) -> BodySpec {
    assert!(n >= 5, "need at least 5 vertices");
    let step = std::f64::consts::TAU / n as f64;
    let mut angles: Vec<f64> = (0..n).map(|k| step * (k as f64 + rng.random_range(-0.3..0.3))).collect();
    angles.sort_by(f64::total_cmp);
    BodySpec::Polygon {
        vertices: angles.iter().map(|a| [a.cos(), a.sin()]).collect(),
    }
}

/// Rejection sampler for the closed Hilbert ball `B(center, radius)` of a planar body.
///
/// Candidates come from the Euclidean bounding box of the sampled ball
/// boundary, padded by 2% since the true ball may bulge past the samples.
pub struct BallSampler<'a> {
    body: &'a ConvexBody,
    center: Point,
    radius: f64,
    lo: [f64; 2],
    hi: [f64; 2],
}

impl<'a> BallSampler<'a> {
    pub fn new(body: &'a ConvexBody, center: &Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(GeomError::BadParameter(format!("ball radius must be > 0, got {radius}")));
        }
        let ball = ball_boundary(body, center, radius, 64)?;
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for s in &ball.samples {
            for k in 0..2 {
                lo[k] = lo[k].min(s.coords()[k]);
                hi[k] = hi[k].max(s.coords()[k]);
            }
        }
        let (blo, bhi) = body.bounding_box();
        for k in 0..2 {
            let pad = 0.02 * (hi[k] - lo[k]);
            lo[k] = (lo[k] - pad).max(blo.coords()[k]);
            hi[k] = (hi[k] + pad).min(bhi.coords()[k]);
        }
        Ok(Self {
            body,
            center: center.clone(),
            radius,
            lo,
            hi,
        })
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        loop {
            let p = Point::xy(
                rng.random_range(self.lo[0]..self.hi[0]),
                rng.random_range(self.lo[1]..self.hi[1]),
            );
            if !self.body.is_interior(&p) {
                continue;
            }
            if distance(self.body, &self.center, &p).is_ok_and(|d| d <= self.radius) {
                return p;
            }
        }
    }
}
