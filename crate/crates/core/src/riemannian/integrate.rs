//! Horizontal lifting of base curves by classical Runge–Kutta.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use super::geodesic::GeodesicSegment;
use crate::algebra::{Quaternion, UnitQuaternion};
use crate::bundle::{FIBER_TOLERANCE, HopfBundle, PrincipalBundle, S2Point};
use crate::error::{Error, Result};

/// A curve `t ∈ [0, 1] ↦ S²` with known velocity.
pub trait BaseCurve {
    fn start(&self) -> Quaternion;
    fn point(&self, t: f64) -> Quaternion;
    fn velocity(&self, t: f64) -> Quaternion;
}

impl BaseCurve for GeodesicSegment {
    fn start(&self) -> Quaternion {
        GeodesicSegment::start(self)
    }
    fn point(&self, t: f64) -> Quaternion {
        GeodesicSegment::point(self, t)
    }
    fn velocity(&self, t: f64) -> Quaternion {
        GeodesicSegment::velocity(self, t)
    }
}

/// `φ ∘ c` for a curve `c` on S³; the velocity is `dφ(c(t))[c'(t)]`.
#[derive(Debug, Clone, Copy)]
pub struct ProjectedCurve {
    pub upstairs: GeodesicSegment,
}

impl BaseCurve for ProjectedCurve {
    fn start(&self) -> Quaternion {
        self.point(0.0)
    }
    fn point(&self, t: f64) -> Quaternion {
        let q = self.upstairs.point(t);
        q.conj() * Quaternion::I * q
    }
    fn velocity(&self, t: f64) -> Quaternion {
        HopfBundle::projection_differential(self.upstairs.point(t), self.upstairs.velocity(t))
    }
}

/// The vector `h` at `q` with `⟨h, q⟩ = 0`, `⟨h, i·q⟩ = 0` and
/// `dφ(q)[h] = v`, in the least-squares sense (RK4 stages evaluate it
/// slightly off the sphere, where the system is inconsistent).
pub fn horizontal_velocity(q: Quaternion, v: Quaternion) -> Result<Quaternion> {
    let iq = Quaternion::I * q;
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K];
    let dphi = basis.map(|e| HopfBundle::projection_differential(q, e));
    // Rows: tangency, horizontality, the three imaginary parts of dφ.
    let mut rows = [[0.0; 4]; 5];
    for k in 0..4 {
        rows[0][k] = q.to_array()[k];
        rows[1][k] = iq.to_array()[k];
        rows[2][k] = dphi[k].x;
        rows[3][k] = dphi[k].y;
        rows[4][k] = dphi[k].z;
    }
    let rhs = [0.0, 0.0, v.x, v.y, v.z];
    let mut normal = Matrix4::<f64>::zeros();
    let mut atb = Vector4::<f64>::zeros();
    for (row, b) in rows.iter().zip(rhs) {
        for i in 0..4 {
            atb[i] += row[i] * b;
            for j in 0..4 {
                normal[(i, j)] += row[i] * row[j];
            }
        }
    }
    let chol = normal.cholesky().ok_or(Error::SolveFailed)?;
    let x = chol.solve(&atb);
    if !x.iter().all(|c| c.is_finite()) {
        return Err(Error::SolveFailed);
    }
    // Off the exact fiber the system is inconsistent; removing the residual
    // components along q and i·q keeps the field tangent and horizontal.
    let h = Quaternion::new(x[0], x[1], x[2], x[3]);
    let n2 = q.norm_squared();
    Ok(h - q.scale(h.dot(q) / n2) - iq.scale(h.dot(iq) / n2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub point: UnitQuaternion,
    pub velocity: Quaternion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftResult {
    pub endpoint: UnitQuaternion,
    pub trajectory: Option<Vec<TrajectorySample>>,
    pub steps: usize,
}

/// Integrates `q' = h(t, q)` from `q0` over `[0, 1]` with `steps` RK4
/// steps, renormalizing to S³ after each step.
pub fn horizontal_lift_path<C: BaseCurve>(
    curve: &C,
    q0: &UnitQuaternion,
    steps: usize,
    record: bool,
) -> Result<LiftResult> {
    if steps == 0 {
        return Err(Error::OutOfRange { value: 0.0, lo: 0.0, hi: f64::INFINITY });
    }
    let start = S2Point::new(curve.start())?;
    let distance = HopfBundle.project(q0).distance(start);
    if distance > FIBER_TOLERANCE {
        return Err(Error::NotSameFiber { distance });
    }

    let field = |t: f64, q: Quaternion| horizontal_velocity(q, curve.velocity(t));
    let h = 1.0 / steps as f64;
    let mut q = q0.quaternion();
    let mut trajectory = record.then(|| Vec::with_capacity(steps + 1));
    for n in 0..steps {
        let t = n as f64 * h;
        let k1 = field(t, q)?;
        if let Some(tr) = trajectory.as_mut() {
            tr.push(TrajectorySample { t, point: UnitQuaternion::normalize(q)?, velocity: k1 });
        }
        let k2 = field(t + 0.5 * h, q + k1.scale(0.5 * h))?;
        let k3 = field(t + 0.5 * h, q + k2.scale(0.5 * h))?;
        let k4 = field(t + h, q + k3.scale(h))?;
        let incr = (k1 + k2.scale(2.0) + k3.scale(2.0) + k4).scale(h / 6.0);
        q = (q + incr).normalized()?;
    }
    if let Some(tr) = trajectory.as_mut() {
        let velocity = field(1.0, q)?;
        tr.push(TrajectorySample { t: 1.0, point: UnitQuaternion::normalize(q)?, velocity });
    }
    Ok(LiftResult { endpoint: UnitQuaternion::normalize(q)?, trajectory, steps })
}
