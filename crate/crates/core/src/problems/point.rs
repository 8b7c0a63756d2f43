use serde::{Deserialize, Serialize};

use crate::error::{GmviError, Result};

/// Coordinates in `[-NEG_TOL, 0)` are treated as rounding noise and clamped.
pub const NEG_TOL: f64 = 1e-12;
/// Allowed deviation of the coordinate sum from one.
pub const SUM_TOL: f64 = 1e-9;

/// A point of the standard simplex `{x >= 0, sum x = 1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(mut coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(GmviError::InvalidPoint("empty coordinate vector".into()));
        }
        for (i, c) in coords.iter_mut().enumerate() {
            if !c.is_finite() {
                return Err(GmviError::InvalidPoint(format!("coordinate {i} is not finite")));
            }
            if *c < -NEG_TOL {
                return Err(GmviError::InvalidPoint(format!("coordinate {i} = {c} is negative")));
            }
            if *c < 0.0 {
                *c = 0.0;
            }
        }
        let sum: f64 = coords.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(GmviError::InvalidPoint(format!("coordinates sum to {sum}")));
        }
        Ok(Point(coords))
    }

    /// Wraps output of a simplex-valued routine, clamping rounding noise.
    pub(crate) fn from_solver(mut coords: Vec<f64>) -> Self {
        for c in coords.iter_mut() {
            if *c < 0.0 {
                *c = 0.0;
            }
        }
        debug_assert!(
            (coords.iter().sum::<f64>() - 1.0).abs() <= SUM_TOL,
            "solver produced a point off the simplex (sum {})",
            coords.iter().sum::<f64>()
        );
        Point(coords)
    }

    /// The barycenter `(1/n, ..., 1/n)`.
    pub fn center(n: usize) -> Self {
        assert!(n > 0, "simplex dimension must be positive");
        Point(vec![1.0 / n as f64; n])
    }

    /// The unit vector `e_i` (zero-based index).
    pub fn vertex(n: usize, i: usize) -> Self {
        assert!(i < n, "vertex index {i} out of range for dimension {n}");
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        Point(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for Point {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = GmviError;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}
