//! Quaternion and circle-group arithmetic.
//!
//! Quaternions are stored by their coefficients on the basis `1, i, j, k`.
//! Unit quaternions model points of S³ and the circle group U(1) is stored
//! as a canonical angle in `(-π, π]`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum norm drift that [`UnitQuaternion::new`] silently corrects.
pub const RENORMALIZE_LIMIT: f64 = 1e-6;

/// A quaternion `w + x·i + y·j + z·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Selector for one of the four basis elements of ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    One,
    I,
    J,
    K,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn imaginary(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    /// Quaternion conjugate: the imaginary part changes sign.
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Coefficient of the selected basis element.
    pub fn project(self, axis: Basis) -> f64 {
        match axis {
            Basis::One => self.w,
            Basis::I => self.x,
            Basis::J => self.y,
            Basis::K => self.z,
        }
    }

    /// Euclidean inner product on ℍ ≅ ℝ⁴.
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroQuaternion);
        }
        Ok(self.scale(1.0 / n))
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Euclidean distance in ℝ⁴.
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

/// A point of S³ ⊂ ℍ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Quaternion", into = "Quaternion")]
pub struct UnitQuaternion(Quaternion);

impl UnitQuaternion {
    pub const ONE: Self = Self(Quaternion::ONE);
    pub const I: Self = Self(Quaternion::I);
    pub const J: Self = Self(Quaternion::J);
    pub const K: Self = Self(Quaternion::K);

    /// Accepts `q` if its norm is within [`RENORMALIZE_LIMIT`] of 1 and
    /// renormalizes it.
    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if !n.is_finite() || (n - 1.0).abs() >= RENORMALIZE_LIMIT {
            return Err(Error::NotUnit { norm: n });
        }
        Ok(Self(q.scale(1.0 / n)))
    }

    /// Projects an arbitrary non-zero quaternion radially onto S³.
    pub fn normalize(q: Quaternion) -> Result<Self> {
        q.normalized().map(Self)
    }

    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    pub fn distance(self, other: Self) -> f64 {
        self.0.distance(other.0)
    }
}

impl TryFrom<Quaternion> for UnitQuaternion {
    type Error = Error;
    fn try_from(q: Quaternion) -> Result<Self> {
        Self::new(q)
    }
}

impl From<UnitQuaternion> for Quaternion {
    fn from(u: UnitQuaternion) -> Self {
        u.0
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let p = self.0 * o.0;
        Self(p.scale(1.0 / p.norm()))
    }
}

impl Neg for UnitQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Maps any real angle into `(-π, π]`.
pub fn canonical_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Operations needed from a structure group.
///
/// Group elements are parametrized near the identity through `exp` on
/// Lie-algebra coordinates of length `DIM`.
pub trait LieGroup: Copy + fmt::Debug + PartialEq + Send + Sync + 'static {
    const DIM: usize;

    fn identity() -> Self;
    fn compose(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
    fn exp(coords: &[f64]) -> Self;
    fn log(&self) -> Vec<f64>;

    /// `|log(self · other⁻¹)|`.
    fn distance(&self, other: &Self) -> f64 {
        self.compose(&other.inverse())
            .log()
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
    }
}

/// Element `e^{iθ}` of U(1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleElement {
    angle: f64,
}

impl CircleElement {
    pub const IDENTITY: Self = Self { angle: 0.0 };

    pub fn from_angle(angle: f64) -> Self {
        Self { angle: canonical_angle(angle) }
    }

    pub fn angle(self) -> f64 {
        self.angle
    }

    pub fn cos(self) -> f64 {
        self.angle.cos()
    }

    pub fn sin(self) -> f64 {
        self.angle.sin()
    }

    /// `cos θ + sin θ · i` as a unit quaternion.
    pub fn to_quaternion(self) -> Quaternion {
        let (s, c) = self.angle.sin_cos();
        Quaternion::new(c, s, 0.0, 0.0)
    }
}

impl Mul for CircleElement {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        Self::from_angle(self.angle + o.angle)
    }
}

impl LieGroup for CircleElement {
    const DIM: usize = 1;

    fn identity() -> Self {
        Self::IDENTITY
    }

    fn compose(&self, other: &Self) -> Self {
        *self * *other
    }

    fn inverse(&self) -> Self {
        Self::from_angle(-self.angle)
    }

    fn exp(coords: &[f64]) -> Self {
        Self::from_angle(coords[0])
    }

    fn log(&self) -> Vec<f64> {
        vec![self.angle]
    }

    fn distance(&self, other: &Self) -> f64 {
        canonical_angle(self.angle - other.angle).abs()
    }
}
