//! Discrete connections on the Hopf bundle induced by the round metric of S³.
//!
//! The vertical space at `q` is spanned by `i·q` and the horizontal space
//! is its orthogonal complement in `T_q S³`. Lifting the minimizing great
//! circle between `φ(q0)` and `φ(q1)` horizontally from `q0` and measuring
//! the fiber offset of its endpoint from `q1` defines
//! [`RiemannianForm`]; [`HopfClosedForm`] is the same form in closed form.
//! [`LmwForm`] lifts the projection of the S³ great circle instead, which
//! breaks equivariance.

mod geodesic;
mod integrate;

pub use geodesic::{base_geodesic, sphere_geodesic, GeodesicSegment, ANTIPODAL_MARGIN};
pub use integrate::{
    horizontal_lift_path, horizontal_velocity, BaseCurve, LiftResult, ProjectedCurve,
    TrajectorySample,
};

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::algebra::{Basis, CircleElement, Quaternion, UnitQuaternion};
use crate::bundle::{HopfBundle, PrincipalBundle};
use crate::connection::{ConnectionForm, HorizontalLift, LiftFromForm, Provenance};
use crate::error::{Error, Result};

/// Lower bound on `P_1(u)² + P_i(u)²`, `u = q1 q̄0`, for pairs in the domain.
pub const DOMAIN_BUFFER: f64 = 1e-12;

/// Default number of RK4 steps for geodesic-built forms.
pub const DEFAULT_STEPS: usize = 256;

/// Base-distance tolerance between an integrated endpoint and `q1`.
const INTEGRATED_FIBER_TOLERANCE: f64 = 1e-6;

/// A vector of ℍ tangent to S³ at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentVector {
    pub base: UnitQuaternion,
    pub vec: Quaternion,
}

impl TangentVector {
    pub fn new(base: UnitQuaternion, vec: Quaternion) -> Result<Self> {
        let inner = vec.dot(base.quaternion());
        if inner.abs() > 1e-9 * vec.norm().max(1.0) {
            return Err(Error::NotTangent { inner });
        }
        Ok(Self { base, vec })
    }
}

/// `ξ_Q(q) = ξ · i·q`.
pub fn infinitesimal_generator(xi: f64, q: &UnitQuaternion) -> TangentVector {
    TangentVector { base: *q, vec: HopfBundle::vertical_direction(q).scale(xi) }
}

/// The Lie-algebra value `ξ = ⟨v, i·q⟩` of the metric connection.
pub fn continuous_connection_form(v: &TangentVector) -> f64 {
    v.vec.dot(HopfBundle::vertical_direction(&v.base))
}

/// `v = ξ · i·q + h` with `⟨h, i·q⟩ = 0`.
pub fn vertical_horizontal_split(v: &TangentVector) -> (f64, Quaternion) {
    let xi = continuous_connection_form(v);
    (xi, v.vec - HopfBundle::vertical_direction(&v.base).scale(xi))
}

/// `u = q1 q̄0` and `P_1(u)² + P_i(u)²`.
fn fiber_offset(q0: &UnitQuaternion, q1: &UnitQuaternion) -> (Quaternion, f64) {
    let u = q1.quaternion() * q0.quaternion().conj();
    let (a, b) = (u.project(Basis::One), u.project(Basis::I));
    (u, a * a + b * b)
}

fn hopf_domain(q0: &UnitQuaternion, q1: &UnitQuaternion) -> bool {
    fiber_offset(q0, q1).1 > DOMAIN_BUFFER
}

/// `A(q0, q1) = (P_1(u) + P_i(u) i) / |P_1(u) + P_i(u) i|`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct HopfClosedForm {
    bundle: HopfBundle,
}

pub fn hopf_closed_form() -> HopfClosedForm {
    HopfClosedForm::default()
}

impl ConnectionForm for HopfClosedForm {
    type Bundle = HopfBundle;

    fn bundle(&self) -> &HopfBundle {
        &self.bundle
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }

    fn in_domain(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> bool {
        hopf_domain(q0, q1)
    }

    fn compute(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> Result<CircleElement> {
        let (u, _) = fiber_offset(q0, q1);
        Ok(CircleElement::from_angle(u.project(Basis::I).atan2(u.project(Basis::One))))
    }
}

/// `A(q0, q1) = κ(γ̃(1), q1)` with `γ̃` the numerically integrated
/// horizontal lift from `q0` of the base geodesic `φ(q0) → φ(q1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannianForm {
    bundle: HopfBundle,
    steps: usize,
}

pub fn riemannian_form(steps: usize) -> RiemannianForm {
    RiemannianForm { bundle: HopfBundle, steps }
}

impl RiemannianForm {
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Endpoint of the horizontal lift of the base geodesic.
    pub fn lift_endpoint(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> Result<UnitQuaternion> {
        let b = &self.bundle;
        let arc = base_geodesic(&b.project(q0), &b.project(q1)).map_err(|e| match e {
            Error::AntipodalPoints => Error::OutOfDomain,
            other => other,
        })?;
        Ok(horizontal_lift_path(&arc, q0, self.steps, false)?.endpoint)
    }
}

impl ConnectionForm for RiemannianForm {
    type Bundle = HopfBundle;

    fn bundle(&self) -> &HopfBundle {
        &self.bundle
    }

    fn provenance(&self) -> Provenance {
        Provenance::GeodesicBuilt
    }

    fn steps(&self) -> Option<usize> {
        Some(self.steps)
    }

    fn in_domain(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> bool {
        hopf_domain(q0, q1)
    }

    fn compute(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> Result<CircleElement> {
        let end = self.lift_endpoint(q0, q1)?;
        self.bundle.kappa_within(&end, q1, INTEGRATED_FIBER_TOLERANCE)
    }
}

/// The geodesic-in-S³ construction: lift `φ ∘ q01` horizontally from `q0`,
/// where `q01` is the S³ great circle from `q0` to `q1`, and return
/// `κ(endpoint, q1)`. Not equivariant; [`Provenance::LmwVariant`] flags it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LmwForm {
    bundle: HopfBundle,
    steps: usize,
}

pub fn lmw_form(steps: usize) -> LmwForm {
    LmwForm { bundle: HopfBundle, steps }
}

impl LmwForm {
    pub fn is_connection(&self) -> bool {
        false
    }
}

impl ConnectionForm for LmwForm {
    type Bundle = HopfBundle;

    fn bundle(&self) -> &HopfBundle {
        &self.bundle
    }

    fn provenance(&self) -> Provenance {
        Provenance::LmwVariant
    }

    fn steps(&self) -> Option<usize> {
        Some(self.steps)
    }

    fn in_domain(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> bool {
        q0.quaternion().dot(q1.quaternion()) > -1.0 + ANTIPODAL_MARGIN
    }

    fn compute(&self, q0: &UnitQuaternion, q1: &UnitQuaternion) -> Result<CircleElement> {
        let curve = ProjectedCurve { upstairs: sphere_geodesic(q0, q1)? };
        let end = horizontal_lift_path(&curve, q0, self.steps, false)?.endpoint;
        self.bundle.kappa_within(&end, q1, INTEGRATED_FIBER_TOLERANCE)
    }
}

/// `β_θ = sin θ · arccos(cos θ / √2) / √(2 − cos² θ)` for `θ ∈ (−π/4, π/4)`.
pub fn beta_theta(theta: f64) -> Result<f64> {
    if !(theta > -FRAC_PI_4 && theta < FRAC_PI_4) {
        return Err(Error::OutOfRange { value: theta, lo: -FRAC_PI_4, hi: FRAC_PI_4 });
    }
    let c = theta.cos();
    Ok(theta.sin() * (c / std::f64::consts::SQRT_2).acos() / (2.0 - c * c).sqrt())
}

/// `(1 + j)/√2`, the horizontal partner of `1` over `k`.
pub fn one_plus_j() -> UnitQuaternion {
    UnitQuaternion::normalize(Quaternion::ONE + Quaternion::J).expect("non-zero")
}

/// One row of [`lift_convergence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub steps: usize,
    /// Distance from the closed-form horizontal lift endpoint in ℝ⁴.
    pub endpoint_error: f64,
}

/// RK4 endpoint error of the lift of `φ(q0) → r1` from `q0`, against the
/// closed-form lift, for each step count.
pub fn lift_convergence(
    q0: &UnitQuaternion,
    r1: &crate::bundle::S2Point,
    steps: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let exact = LiftFromForm::with_section(hopf_closed_form(), crate::connection::SectionChoice::AnyChart)
        .lift(q0, r1)?;
    let arc = base_geodesic(&HopfBundle.project(q0), r1)?;
    steps
        .iter()
        .map(|&n| {
            let end = horizontal_lift_path(&arc, q0, n, false)?.endpoint;
            Ok(ConvergenceRow { steps: n, endpoint_error: end.distance(exact) })
        })
        .collect()
}
