//! Hilbert geometry of bounded convex domains.
//!
//! - [`convex_domain`]: bodies, membership and boundary oracles.
//! - [`hilbert_metric`]: the metric, rays, spheres and balls.
//! - [`coarse_props`]: contraction, packing and corona probes.
//! - [`asdim_cover`]: the planar cover with bounded pieces and r-multiplicity at most 3.
//! - [`verify`]: property suites that tie the above together.

pub mod asdim_cover;
pub mod coarse_props;
pub mod convex_domain;
pub mod error;
pub mod hilbert_metric;
pub mod sampling;
pub mod verify;

pub use convex_domain::{BodySpec, Chord, ConvexBody, Direction, Membership, Point};
pub use error::{GeomError, Result};
pub use hilbert_metric::distance;

/// Maps an angle into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(std::f64::consts::TAU);
    if w >= std::f64::consts::TAU {
        0.0
    } else {
        w
    }
}
