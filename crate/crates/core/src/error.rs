use thiserror::Error;

/// Everything that can go wrong while building bodies or evaluating the metric.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("invalid body description: {0}")]
    InvalidSpec(String),
    #[error("polygon is not strictly convex at vertex {index}")]
    NonConvex { index: usize },
    #[error("body is unbounded (boundary probe escaped radius {radius:e})")]
    Unbounded { radius: f64 },
    #[error("body has empty interior")]
    EmptyInterior,
    #[error("base point is not interior to the body")]
    ExteriorBase,
    #[error("point {0} is not interior to the body")]
    ExteriorPoint(String),
    #[error("points coincide (separation below {tol:e})")]
    CoincidentPoints { tol: f64 },
    #[error("operation `{op}` supports dimension 2 only, got {dim}")]
    DimensionUnsupported { op: &'static str, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("direction vector has zero length")]
    ZeroDirection,
    #[error("point lies off the chord line")]
    OffChord,
    #[error("points are not in the required order along the line")]
    BadOrder,
    #[error("parameter must be non-negative, got {0}")]
    NegativeParameter(f64),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("bad radii: {0}")]
    BadRadii(String),
    #[error("ball B(x, r) is not contained in B(center, R)")]
    BallNotContained,
    #[error("input points are collinear")]
    CollinearInput,
    #[error("distances from the base point differ by {0:e}")]
    DistanceMismatch(f64),
    #[error("segment is not contained in the boundary")]
    NotOnBoundary,
    #[error(
        "arc [{start:.6}, {end:.6}] on level {level} has no point at distance >= R (sampled max {max_distance:.9}, R = {step})"
    )]
    Star1Violation {
        level: usize,
        start: f64,
        end: f64,
        max_distance: f64,
        step: f64,
    },
    #[error("ray from the base point through itself is undefined")]
    DegenerateRay,
}

pub type Result<T> = std::result::Result<T, GeomError>;
