use serde::{Deserialize, Serialize};

use super::{check_len, PrincipalBundle};
use crate::algebra::{CircleElement, LieGroup};
use crate::error::{Error, Result};

/// A point `(r, g)` of ℝⁿ × U(1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrivialPoint {
    pub r: Vec<f64>,
    pub g: CircleElement,
}

impl TrivialPoint {
    pub fn new(r: Vec<f64>, g: CircleElement) -> Self {
        Self { r, g }
    }
}

/// The trivial bundle `p₁: ℝⁿ × U(1) → ℝⁿ` with `h·(r, g) = (r, h g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrivialBundle {
    dim: usize,
}

impl TrivialBundle {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "trivial bundle needs a base of positive dimension");
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn chord_squared(a: CircleElement, b: CircleElement) -> f64 {
    let (dc, ds) = (a.cos() - b.cos(), a.sin() - b.sin());
    dc * dc + ds * ds
}

impl PrincipalBundle for TrivialBundle {
    type Total = TrivialPoint;
    type Base = Vec<f64>;
    type Group = CircleElement;

    fn name(&self) -> String {
        format!("trivial(n={})", self.dim)
    }

    fn dim_base(&self) -> usize {
        self.dim
    }

    fn project(&self, q: &TrivialPoint) -> Vec<f64> {
        q.r.clone()
    }

    fn act(&self, g: &CircleElement, q: &TrivialPoint) -> TrivialPoint {
        TrivialPoint::new(q.r.clone(), *g * q.g)
    }

    fn kappa_within(&self, q0: &TrivialPoint, q1: &TrivialPoint, tol: f64) -> Result<CircleElement> {
        let distance = euclidean(&q0.r, &q1.r);
        if distance > tol || q0.r.len() != q1.r.len() {
            return Err(Error::NotSameFiber { distance });
        }
        Ok(q1.g * q0.g.inverse())
    }

    fn local_section(&self, r: &Vec<f64>) -> Result<TrivialPoint> {
        check_len(r, self.dim)?;
        Ok(TrivialPoint::new(r.clone(), CircleElement::IDENTITY))
    }

    fn total_distance(&self, a: &TrivialPoint, b: &TrivialPoint) -> f64 {
        let dr = euclidean(&a.r, &b.r);
        (dr * dr + chord_squared(a.g, b.g)).sqrt()
    }

    fn base_distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> f64 {
        euclidean(a, b)
    }

    /// `(r₁, …, rₙ, cos g, sin g)`.
    fn total_coords(&self, q: &TrivialPoint) -> Vec<f64> {
        let mut c = q.r.clone();
        c.push(q.g.cos());
        c.push(q.g.sin());
        c
    }

    fn total_from_coords(&self, coords: &[f64]) -> Result<TrivialPoint> {
        check_len(coords, self.dim + 2)?;
        let (c, s) = (coords[self.dim], coords[self.dim + 1]);
        Ok(TrivialPoint::new(
            coords[..self.dim].to_vec(),
            CircleElement::from_angle(s.atan2(c)),
        ))
    }

    fn base_coords(&self, r: &Vec<f64>) -> Vec<f64> {
        r.clone()
    }

    fn base_from_coords(&self, coords: &[f64]) -> Result<Vec<f64>> {
        check_len(coords, self.dim)?;
        Ok(coords.to_vec())
    }

    fn base_chart(&self, center: &Vec<f64>, coords: &[f64]) -> Vec<f64> {
        center.iter().zip(coords).map(|(c, s)| c + s).collect()
    }
}
