//! JSON description of a body, as read from disk or built in code.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum BodySpec {
    /// Planar polygon; vertices in either orientation.
    Polygon { vertices: Vec<[f64; 2]> },
    /// Ellipse (or ellipsoid). `rotation_rad` rotates the axes in the plane;
    /// `rotation` (rows of an orthonormal matrix whose columns are the principal
    /// axes) may be given instead for any dimension.
    Ellipse {
        center: Vec<f64>,
        semi_axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation_rad: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rotation: Option<Vec<Vec<f64>>>,
    },
    /// Euclidean ball.
    Disk { center: Vec<f64>, radius: f64 },
    /// Intersection of half-spaces `normal · x <= offset`.
    Polytope { halfspaces: Vec<Halfspace> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl BodySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| GeomError::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("body spec serializes")
    }

    pub fn unit_disk() -> Self {
        BodySpec::Disk {
            center: vec![0.0, 0.0],
            radius: 1.0,
        }
    }

    /// Axis-aligned square `[-h, h]²`, counterclockwise.
    pub fn square(h: f64) -> Self {
        BodySpec::Polygon {
            vertices: vec![[-h, -h], [h, -h], [h, h], [-h, h]],
        }
    }

    pub fn ellipse(a: f64, b: f64, rotation_rad: f64) -> Self {
        BodySpec::Ellipse {
            center: vec![0.0, 0.0],
            semi_axes: vec![a, b],
            rotation_rad: Some(rotation_rad),
            rotation: None,
        }
    }
}
