//! Unit axes on the Poincare sphere.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::moments::StokesMoments;

const UNIT_TOL: f64 = 1e-12;

/// A real unit 3-vector selecting the Stokes component `S_n = n . S`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis([f64; 3]);

impl Axis {
    pub const S1: Axis = Axis([1.0, 0.0, 0.0]);
    pub const S2: Axis = Axis([0.0, 1.0, 0.0]);
    pub const S3: Axis = Axis([0.0, 0.0, 1.0]);
    pub const COORDINATE: [Axis; 3] = [Axis::S1, Axis::S2, Axis::S3];

    /// Accepts `n` only if it is already unit length to within `1e-12`.
    pub fn new(n: [f64; 3]) -> Result<Self> {
        if n.iter().any(|x| !x.is_finite()) {
            return Err(invalid("axis components must be finite"));
        }
        let norm = norm(n);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(invalid(format!("axis is not a unit vector (norm {norm})")));
        }
        Ok(Self(n))
    }

    /// Rescales a non-zero vector to unit length.
    pub fn normalized(n: [f64; 3]) -> Result<Self> {
        let norm = norm(n);
        if !norm.is_finite() || norm == 0.0 {
            return Err(invalid("cannot normalize a zero or non-finite vector"));
        }
        Ok(Self([n[0] / norm, n[1] / norm, n[2] / norm]))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Index of the coordinate axis this is, if any.
    pub fn coordinate_index(&self) -> Option<usize> {
        Axis::COORDINATE.iter().position(|a| a == self)
    }

    /// Deterministic Fibonacci lattice of `count` axes covering the sphere.
    pub fn fibonacci_lattice(count: usize) -> Vec<Axis> {
        let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
        (0..count)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * i as f64;
                Axis::normalized([r * phi.cos(), r * phi.sin(), z]).expect("lattice point is non-zero")
            })
            .collect()
    }
}

fn norm(n: [f64; 3]) -> f64 {
    n.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Largest mean Stokes component perpendicular to `n`:
/// `sqrt(|<S>|^2 - <S_n>^2)`. A tiny negative radicand from rounding is
/// clamped to zero.
pub fn axis_complement_max(moments: &StokesMoments, n: &Axis) -> f64 {
    let mean = moments.mean;
    let total: f64 = mean.iter().map(|x| x * x).sum();
    let along = n.dot(&mean);
    (total - along * along).max(0.0).sqrt()
}
