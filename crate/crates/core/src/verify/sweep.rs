//! The one-parameter family `(1, e^{iθ}·(1 + j)/√2)` on which the
//! geodesic-in-S³ construction departs from equivariance.

use std::f64::consts::FRAC_PI_4;

use serde::Serialize;

use crate::algebra::{CircleElement, LieGroup, UnitQuaternion};
use crate::bundle::{HopfBundle, PrincipalBundle};
use crate::connection::ConnectionForm;
use crate::error::{Error, Result};
use crate::riemannian::{beta_theta, lmw_form, one_plus_j};

/// Central-difference step for the derivative of `θ ↦ A(1, e^{iθ}(1+j)/√2)`.
pub const DERIVATIVE_STEP: f64 = 1e-5;
/// Expected value of that derivative at `θ = 0`.
pub const DERIVATIVE_AT_ZERO: f64 = FRAC_PI_4;
/// Tolerance on the derivative check.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub beta_formula: f64,
    pub lmw_angle: f64,
    /// `e^{iθ}·A(1, (1+j)/√2)`, what equivariance would predict.
    pub equivariant_angle: f64,
    pub abs_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub steps: usize,
    pub rows: Vec<SweepRow>,
    /// Central-difference derivative of the measured angle at `θ = 0`.
    pub derivative_at_zero: f64,
    pub derivative_matches: bool,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in &self.rows {
            w.serialize(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{:>10} {:>12} {:>12} {:>12} {:>12}\n",
            "theta", "beta", "measured", "equivariant", "|diff|"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:>10.5} {:>12.8} {:>12.8} {:>12.8} {:>12.8}\n",
                r.theta, r.beta_formula, r.lmw_angle, r.equivariant_angle, r.abs_difference
            ));
        }
        out.push_str(&format!(
            "derivative at 0: {:.6} (expected {:.6}, {})\n",
            self.derivative_at_zero,
            DERIVATIVE_AT_ZERO,
            if self.derivative_matches { "match" } else { "MISMATCH" }
        ));
        out
    }
}

/// Inclusive grid `start, start + step, …` up to `stop`.
pub fn theta_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::OutOfRange { value: step, lo: 0.0, hi: f64::INFINITY });
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| start + k as f64 * step).collect())
}

/// Tabulates the measured angle of the geodesic-in-S³ form at
/// `(1, e^{iθ}(1+j)/√2)` against the closed-form `β_θ` and against the
/// equivariant prediction. Every `θ` must lie in `(−π/4, π/4)`.
pub fn counterexample_sweep(grid: &[f64], steps: usize) -> Result<SweepTable> {
    let form = lmw_form(steps);
    let b = HopfBundle;
    let one = UnitQuaternion::ONE;
    let base = one_plus_j();
    let at = |theta: f64| -> Result<CircleElement> {
        form.evaluate(&one, &b.act(&CircleElement::from_angle(theta), &base))
    };
    let base_value = at(0.0)?;
    let rows = grid
        .iter()
        .map(|&theta| {
            let beta_formula = beta_theta(theta)?;
            let lmw_angle = at(theta)?.angle();
            let equivariant_angle = CircleElement::from_angle(theta).compose(&base_value).angle();
            Ok(SweepRow {
                theta,
                beta_formula,
                lmw_angle,
                equivariant_angle,
                abs_difference: (lmw_angle - equivariant_angle).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let h = DERIVATIVE_STEP;
    let derivative_at_zero = (at(h)?.angle() - at(-h)?.angle()) / (2.0 * h);
    Ok(SweepTable {
        steps,
        rows,
        derivative_at_zero,
        derivative_matches: (derivative_at_zero - DERIVATIVE_AT_ZERO).abs() <= DERIVATIVE_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_is_inclusive() {
        assert_eq!(theta_grid(-0.7, 0.7, 0.05).unwrap().len(), 29);
        assert_eq!(theta_grid(0.0, 0.0, 0.1).unwrap(), vec![0.0]);
        assert!(theta_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn sweep_matches_the_beta_formula() {
        let grid = theta_grid(-0.7, 0.7, 0.05).unwrap();
        let t = counterexample_sweep(&grid, 256).unwrap();
        assert_eq!(t.rows.len(), 29);
        for r in &t.rows {
            assert!((r.lmw_angle - r.beta_formula).abs() <= 1e-4, "{r:?}");
            assert!((r.equivariant_angle - r.theta).abs() <= 1e-12);
        }
        assert!(t.derivative_matches, "{}", t.derivative_at_zero);
        let csv = t.to_csv();
        assert!(csv.starts_with("theta,beta_formula,lmw_angle,equivariant_angle,abs_difference\n"));
        assert_eq!(csv.lines().count(), 30);
    }

    #[test]
    fn endpoints_of_the_interval_are_rejected() {
        assert!(matches!(counterexample_sweep(&[PI / 4.0], 16), Err(Error::OutOfRange { .. })));
    }
}
