use serde::{Deserialize, Serialize};

use super::{check_len, PrincipalBundle};
use crate::algebra::{Basis, CircleElement, Quaternion, UnitQuaternion};
use crate::error::{Error, Result};

/// Base points closer than this to the pole of a section chart are rejected.
const SECTION_POLE_RADIUS: f64 = 1e-6;

/// A point of S², stored as a unit imaginary quaternion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct S2Point(Quaternion);

impl S2Point {
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Drops the real part of `q` and normalizes the rest.
    pub fn new(q: Quaternion) -> Result<Self> {
        Quaternion::imaginary(q.x, q.y, q.z).normalized().map(Self)
    }

    pub fn from_xyz(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(Quaternion::imaginary(x, y, z))
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn xyz(self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn dot(self, other: Self) -> f64 {
        self.0.dot(other.0)
    }

    pub fn antipode(self) -> Self {
        Self(-self.0)
    }

    pub fn distance(self, other: Self) -> f64 {
        self.0.distance(other.0)
    }
}

/// The Hopf bundle `φ(q) = q̄ i q` from S³ to S² with U(1) acting by left
/// multiplication with `cos θ + sin θ · i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HopfBundle;

impl HopfBundle {
    /// Generator of the action at `q`: `i·q`.
    pub fn vertical_direction(q: &UnitQuaternion) -> Quaternion {
        Quaternion::I * q.quaternion()
    }

    /// Differential of the projection: `dφ(q)[h] = h̄ i q + q̄ i h`.
    pub fn projection_differential(q: Quaternion, h: Quaternion) -> Quaternion {
        h.conj() * Quaternion::I * q + q.conj() * Quaternion::I * h
    }

    /// Section `σ(r) = normalize(-1 + i·r)`, defined away from `-i`.
    pub fn primary_section(r: &S2Point) -> Result<UnitQuaternion> {
        if r.distance(S2Point::I.antipode()) <= SECTION_POLE_RADIUS {
            return Err(Error::SectionUndefined);
        }
        UnitQuaternion::normalize(-Quaternion::ONE + Quaternion::I * r.quaternion())
            .map_err(|_| Error::SectionUndefined)
    }

    /// Second chart `σ'(r) = σ(j r j̄) · j`, defined away from `+i`.
    ///
    /// Conjugation by `j` is the half-turn about the `j` axis, so
    /// `φ(σ(j r j̄)·j) = j̄ (j r j̄) j = r`.
    pub fn secondary_section(r: &S2Point) -> Result<UnitQuaternion> {
        if r.distance(S2Point::I) <= SECTION_POLE_RADIUS {
            return Err(Error::SectionUndefined);
        }
        let rotated = S2Point::new(Quaternion::J * r.quaternion() * Quaternion::J.conj())?;
        let s = Self::primary_section(&rotated)?;
        Ok(s * UnitQuaternion::J)
    }
}

impl PrincipalBundle for HopfBundle {
    type Total = UnitQuaternion;
    type Base = S2Point;
    type Group = CircleElement;

    fn name(&self) -> String {
        "hopf".into()
    }

    fn dim_base(&self) -> usize {
        2
    }

    fn project(&self, q: &UnitQuaternion) -> S2Point {
        let q = q.quaternion();
        let r = q.conj() * Quaternion::I * q;
        S2Point::new(r).expect("φ maps S³ onto S²")
    }

    fn act(&self, g: &CircleElement, q: &UnitQuaternion) -> UnitQuaternion {
        UnitQuaternion::normalize(g.to_quaternion() * q.quaternion())
            .expect("left multiplication by a unit quaternion preserves the norm")
    }

    fn kappa_within(
        &self,
        q0: &UnitQuaternion,
        q1: &UnitQuaternion,
        tol: f64,
    ) -> Result<CircleElement> {
        let distance = self.project(q0).distance(self.project(q1));
        if distance > tol {
            return Err(Error::NotSameFiber { distance });
        }
        let u = q1.quaternion() * q0.quaternion().conj();
        Ok(CircleElement::from_angle(u.project(Basis::I).atan2(u.project(Basis::One))))
    }

    fn local_section(&self, r: &S2Point) -> Result<UnitQuaternion> {
        Self::primary_section(r)
    }

    fn fiber_point(&self, r: &S2Point) -> Result<UnitQuaternion> {
        if r.dot(S2Point::I) > -0.5 {
            Self::primary_section(r)
        } else {
            Self::secondary_section(r)
        }
    }

    fn total_distance(&self, a: &UnitQuaternion, b: &UnitQuaternion) -> f64 {
        a.distance(*b)
    }

    fn base_distance(&self, a: &S2Point, b: &S2Point) -> f64 {
        a.distance(*b)
    }

    fn total_coords(&self, q: &UnitQuaternion) -> Vec<f64> {
        q.quaternion().to_array().to_vec()
    }

    fn total_from_coords(&self, coords: &[f64]) -> Result<UnitQuaternion> {
        check_len(coords, 4)?;
        UnitQuaternion::new(Quaternion::new(coords[0], coords[1], coords[2], coords[3]))
    }

    fn base_coords(&self, r: &S2Point) -> Vec<f64> {
        r.xyz().to_vec()
    }

    fn base_from_coords(&self, coords: &[f64]) -> Result<S2Point> {
        check_len(coords, 3)?;
        S2Point::from_xyz(coords[0], coords[1], coords[2])
    }

    fn base_chart(&self, center: &S2Point, coords: &[f64]) -> S2Point {
        let (e1, e2) = tangent_frame(center);
        let p = center.quaternion() + e1.scale(coords[0]) + e2.scale(coords[1]);
        S2Point::new(p).expect("chart point is non-zero near the centre")
    }
}

/// Orthonormal basis of the tangent plane of S² at `c`.
pub(crate) fn tangent_frame(c: &S2Point) -> (Quaternion, Quaternion) {
    let [x, y, z] = c.xyz().map(f64::abs);
    let axis = if x <= y && x <= z {
        Quaternion::I
    } else if y <= z {
        Quaternion::J
    } else {
        Quaternion::K
    };
    let c = c.quaternion();
    let e1 = (axis - c.scale(axis.dot(c))).normalized().expect("axis not parallel to c");
    // For orthogonal imaginary quaternions the product is the cross product.
    let e2 = c * e1;
    (e1, e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LieGroup;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn one_plus_j() -> UnitQuaternion {
        UnitQuaternion::new((Quaternion::ONE + Quaternion::J).scale(FRAC_1_SQRT_2)).unwrap()
    }

    #[test]
    fn projection_examples() {
        let h = HopfBundle;
        assert!(h.project(&UnitQuaternion::ONE).distance(S2Point::I) <= 1e-15);
        // (1 - j) i (1 + j) / 2 = (i - ji)(1 + j)/2 = (i + k)(1 + j)/2 = (i + ij + k + kj)/2 = k
        assert!(h.project(&one_plus_j()).distance(S2Point::K) <= 1e-15);
    }

    #[test]
    fn action_examples() {
        let h = HopfBundle;
        let q = h.act(&CircleElement::from_angle(FRAC_PI_2), &UnitQuaternion::ONE);
        assert!(q.distance(UnitQuaternion::I) <= 1e-15);
        let p = one_plus_j();
        assert_eq!(h.act(&CircleElement::IDENTITY, &p), p);
    }

    #[test]
    fn kappa_examples() {
        let h = HopfBundle;
        let p = one_plus_j();
        assert_eq!(h.kappa(&p, &p).unwrap(), CircleElement::IDENTITY);
        let g = h.kappa(&UnitQuaternion::ONE, &UnitQuaternion::I).unwrap();
        assert!((g.angle() - FRAC_PI_2).abs() <= 1e-15);
        assert!(matches!(
            h.kappa(&UnitQuaternion::ONE, &UnitQuaternion::J),
            Err(Error::NotSameFiber { .. })
        ));
    }

    #[test]
    fn section_examples() {
        let h = HopfBundle;
        let s = h.local_section(&S2Point::I).unwrap();
        assert_eq!(s.quaternion(), -Quaternion::ONE);
        assert!(h.project(&s).distance(S2Point::I) <= 1e-15);

        let s = h.local_section(&S2Point::K).unwrap();
        assert!(s.distance(-one_plus_j()) <= 1e-15);
        assert!(h.project(&s).distance(S2Point::K) <= 1e-15);

        assert_eq!(h.local_section(&S2Point::I.antipode()), Err(Error::SectionUndefined));
        let near = S2Point::from_xyz(-1.0, 1e-8, 0.0).unwrap();
        assert_eq!(h.local_section(&near), Err(Error::SectionUndefined));
        assert_eq!(HopfBundle::secondary_section(&S2Point::I), Err(Error::SectionUndefined));
    }

    #[test]
    fn both_charts_are_sections() {
        let h = HopfBundle;
        for r in [S2Point::J, S2Point::K, S2Point::from_xyz(0.3, -0.4, 0.5).unwrap()] {
            let a = HopfBundle::primary_section(&r).unwrap();
            let b = HopfBundle::secondary_section(&r).unwrap();
            assert!(h.project(&a).distance(r) <= 1e-14);
            assert!(h.project(&b).distance(r) <= 1e-14);
        }
        let r = S2Point::I.antipode();
        assert!(h.project(&h.fiber_point(&r).unwrap()).distance(r) <= 1e-14);
    }

    #[test]
    fn vertical_directions_project_to_zero() {
        let q = UnitQuaternion::normalize(Quaternion::new(0.1, -0.7, 0.3, 0.2)).unwrap();
        let v = HopfBundle::vertical_direction(&q);
        assert!(HopfBundle::projection_differential(q.quaternion(), v).norm() <= 1e-15);
    }

    #[test]
    fn chart_is_centred_and_coordinates_round_trip() {
        let h = HopfBundle;
        let c = S2Point::from_xyz(0.2, 0.9, -0.1).unwrap();
        assert!(h.base_chart(&c, &[0.0, 0.0]).distance(c) <= 1e-15);
        let (e1, e2) = tangent_frame(&c);
        assert!(e1.dot(e2).abs() <= 1e-15 && e1.dot(c.quaternion()).abs() <= 1e-15);
        assert!((e2.norm() - 1.0).abs() <= 1e-15 && e2.w.abs() <= 1e-15);
        let q = one_plus_j();
        assert_eq!(h.total_from_coords(&h.total_coords(&q)).unwrap(), q);
        assert!(h.total_from_coords(&[1.0, 0.0]).is_err());
        let g = CircleElement::from_angle(0.3);
        assert_eq!(CircleElement::exp(&g.log()), g);
    }
}
