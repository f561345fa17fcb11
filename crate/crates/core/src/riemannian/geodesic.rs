use serde::Serialize;

use crate::algebra::{Quaternion, UnitQuaternion};
use crate::bundle::S2Point;
use crate::error::{Error, Result};

/// Pairs with `⟨a, b⟩ ≤ -1 + ANTIPODAL_MARGIN` have no unique minimizing arc.
pub const ANTIPODAL_MARGIN: f64 = 1e-9;

/// Constant-speed great-circle arc `t ∈ [0, 1] ↦ cos(tω) a + sin(tω) u`
/// between two unit vectors of ℍ, where `u` is the unit direction of
/// `b` orthogonal to `a` and `ω` the angle between them.
///
/// Used both for S² (imaginary quaternions) and S³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeodesicSegment {
    start: Quaternion,
    end: Quaternion,
    direction: Quaternion,
    angle: f64,
}

impl GeodesicSegment {
    fn between(a: Quaternion, b: Quaternion) -> Result<Self> {
        let c = a.dot(b);
        if c <= -1.0 + ANTIPODAL_MARGIN {
            return Err(Error::AntipodalPoints);
        }
        let perp = b - a.scale(c);
        let s = perp.norm();
        let angle = s.atan2(c);
        let direction = if s > 0.0 { perp.scale(1.0 / s) } else { Quaternion::ZERO };
        Ok(Self { start: a, end: b, direction, angle })
    }

    pub fn start(&self) -> Quaternion {
        self.start
    }

    pub fn end(&self) -> Quaternion {
        self.end
    }

    /// Arc length under the round metric.
    pub fn length(&self) -> f64 {
        self.angle
    }

    pub fn point(&self, t: f64) -> Quaternion {
        let (s, c) = (t * self.angle).sin_cos();
        self.start.scale(c) + self.direction.scale(s)
    }

    pub fn velocity(&self, t: f64) -> Quaternion {
        let (s, c) = (t * self.angle).sin_cos();
        (self.direction.scale(c) - self.start.scale(s)).scale(self.angle)
    }
}

/// Minimizing great-circle arc on S² from `r0` to `r1`.
pub fn base_geodesic(r0: &S2Point, r1: &S2Point) -> Result<GeodesicSegment> {
    GeodesicSegment::between(r0.quaternion(), r1.quaternion())
}

/// Minimizing great-circle arc on S³ from `q0` to `q1`.
pub fn sphere_geodesic(q0: &UnitQuaternion, q1: &UnitQuaternion) -> Result<GeodesicSegment> {
    GeodesicSegment::between(q0.quaternion(), q1.quaternion())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn examples() {
        let g = base_geodesic(&S2Point::I, &S2Point::I).unwrap();
        assert_eq!(g.length(), 0.0);
        assert_eq!(g.point(0.7), Quaternion::I);
        assert_eq!(g.velocity(0.3), Quaternion::ZERO);

        // Oracle: normalized midpoint of the chord.
        let g = base_geodesic(&S2Point::I, &S2Point::K).unwrap();
        let mid = (Quaternion::I + Quaternion::K).normalized().unwrap();
        assert!(g.point(0.5).distance(mid) <= 1e-15);
        assert!((g.length() - FRAC_PI_2).abs() <= 1e-15);

        assert_eq!(
            base_geodesic(&S2Point::I, &S2Point::I.antipode()),
            Err(Error::AntipodalPoints)
        );
    }

    #[test]
    fn endpoints_and_constant_speed() {
        let r0 = S2Point::from_xyz(0.3, -0.2, 0.9).unwrap();
        let r1 = S2Point::from_xyz(-0.6, 0.7, 0.1).unwrap();
        let g = base_geodesic(&r0, &r1).unwrap();
        assert!(g.point(0.0).distance(r0.quaternion()) <= 1e-9);
        assert!(g.point(1.0).distance(r1.quaternion()) <= 1e-9);
        assert!((g.length() - r0.dot(r1).acos()).abs() <= 1e-12);
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            assert!((g.velocity(t).norm() - g.length()).abs() <= 1e-9 * g.length());
            assert!(g.velocity(t).dot(g.point(t)).abs() <= 1e-12);
            // Finite-difference oracle for the velocity.
            let h = 1e-6;
            let fd = (g.point(t + h) - g.point(t - h)).scale(0.5 / h);
            assert!(fd.distance(g.velocity(t)) <= 1e-8);
        }
    }
}
