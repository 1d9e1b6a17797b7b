use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{GeomError, Result};

pub(crate) type Coords = SmallVec<[f64; 4]>;

/// A point (or displacement) in ℝⁿ.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point {
    coords: Coords,
}

impl Point {
    pub fn new(coords: impl IntoIterator<Item = f64>) -> Self {
        Self {
            coords: coords.into_iter().collect(),
        }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Self {
            coords: smallvec::smallvec![x, y],
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            coords: smallvec::smallvec![0.0; dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.coords[0]
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.coords[1]
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    #[inline]
    pub fn dot(&self, other: &Point) -> f64 {
        dot(&self.coords, &other.coords)
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Euclidean distance `|self other|`.
    #[inline]
    pub fn dist(&self, other: &Point) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self + s * dir`
    #[inline]
    pub fn offset(&self, dir: &Direction, s: f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(dir.coords())
                .map(|(p, u)| p + s * u)
                .collect(),
        }
    }

    /// Affine combination `(1 - lambda) * self + lambda * other`.
    pub fn lerp(&self, other: &Point, lambda: f64) -> Point {
        Point {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + lambda * (b - a))
                .collect(),
        }
    }

    /// Polar angle of `self - origin` in `[0, 2π)`; 2-D only.
    pub fn angle_from(&self, origin: &Point) -> f64 {
        let a = (self.y() - origin.y()).atan2(self.x() - origin.x());
        crate::wrap_angle(a)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(GeomError::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Point{:?}", self.coords.as_slice())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point {
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point {
            coords: self.coords.iter().map(|a| a * s).collect(),
        }
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        self * -1.0
    }
}

/// A unit vector.
#[derive(Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Direction {
    coords: Coords,
}

impl Direction {
    /// Normalizes `v`; fails on a zero or non-finite vector.
    pub fn new(v: &Point) -> Result<Self> {
        let n = v.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeomError::ZeroDirection);
        }
        Ok(Self {
            coords: v.coords.iter().map(|c| c / n).collect(),
        })
    }

    /// Unit vector from `from` towards `to`.
    pub fn between(from: &Point, to: &Point) -> Result<Self> {
        Self::new(&(to - from))
    }

    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            coords: smallvec::smallvec![c, s],
        }
    }

    /// `k`-th standard basis vector, with sign.
    pub fn axis(dim: usize, k: usize, positive: bool) -> Self {
        let mut coords: Coords = smallvec::smallvec![0.0; dim];
        coords[k] = if positive { 1.0 } else { -1.0 };
        Self { coords }
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn reversed(&self) -> Direction {
        Direction {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn to_point(&self) -> Point {
        Point {
            coords: self.coords.clone(),
        }
    }

    #[inline]
    pub fn dot(&self, p: &Point) -> f64 {
        dot(&self.coords, p.coords())
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction{:?}", self.coords.as_slice())
    }
}

/// z-component of the 2-D cross product.
#[inline]
pub fn cross2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_is_unit() {
        let d = Direction::new(&Point::xy(3.0, 4.0)).unwrap();
        assert!((d.to_point().norm() - 1.0).abs() < 1e-12);
        assert_eq!(Direction::new(&Point::xy(0.0, 0.0)), Err(GeomError::ZeroDirection));
    }

    #[test]
    fn reversed_direction_is_exact_negation() {
        let x = Point::xy(0.1, -0.3);
        let y = Point::xy(0.7, 0.2);
        let u = Direction::between(&x, &y).unwrap();
        let v = Direction::between(&y, &x).unwrap();
        assert_eq!(u.reversed(), v);
    }

    #[test]
    fn angle_wraps_into_range() {
        let o = Point::xy(0.0, 0.0);
        let a = Point::xy(0.0, -1.0).angle_from(&o);
        assert!((a - 1.5 * std::f64::consts::PI).abs() < 1e-15);
    }
}
