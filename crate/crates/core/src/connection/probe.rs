//! Numerical probes of the horizontal slice `Hor²(q) = {q' : A(q, q') = e}`
//! against the orbit `{g·q}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{ConnectionForm, HorizontalLift, LiftFromForm, SectionChoice, TotalOf};
use crate::algebra::LieGroup;
use crate::bundle::PrincipalBundle;
use crate::error::{Error, Result};

/// Minimum slice/orbit distance a transversal probe must report.
pub const DEFAULT_SEPARATION: f64 = 1e-2;

const EXCLUSION_RADIUS: f64 = 1e-3;
/// Chart radii for slice samples.
const SLICE_RADII: (f64, f64) = (0.05, 0.6);
const MAX_ROOT_ITERATIONS: usize = 80;
const ROOT_TOLERANCE: f64 = 1e-13;
const FD_STEP: f64 = 1e-5;
const RANK_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceProbeReport {
    pub slice_samples: usize,
    pub orbit_samples: usize,
    /// `None` when either sample set is empty.
    pub min_separation: Option<f64>,
    pub threshold: f64,
    /// Largest `|A(q, s)|` over the slice samples.
    pub max_slice_residual: f64,
    pub separated: bool,
}

/// Solves `A(q, exp(θ)·p) = e` for `θ` with a bracketed secant/bisection
/// hybrid. `p` must lie in the domain paired with `q`.
fn solve_slice_point<F: ConnectionForm>(
    form: &F,
    q: &TotalOf<F::Bundle>,
    p: &TotalOf<F::Bundle>,
) -> Result<(TotalOf<F::Bundle>, f64)> {
    let b = form.bundle();
    let residual = |theta: f64| -> Result<f64> {
        let g = <F::Bundle as PrincipalBundle>::Group::exp(&[theta]);
        Ok(form.evaluate(q, &b.act(&g, p))?.log()[0])
    };
    let guess = -residual(0.0)?;
    let (mut lo, mut hi) = (guess - 0.5, guess + 0.5);
    let (mut f_lo, mut f_hi) = (residual(lo)?, residual(hi)?);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::ProbeFailed(format!(
            "no sign change on [{lo}, {hi}] (residuals {f_lo}, {f_hi})"
        )));
    }
    let mut theta = guess;
    let mut f = residual(theta)?;
    for _ in 0..MAX_ROOT_ITERATIONS {
        if f.abs() <= ROOT_TOLERANCE {
            break;
        }
        if f.signum() == f_lo.signum() {
            (lo, f_lo) = (theta, f);
        } else {
            (hi, f_hi) = (theta, f);
        }
        let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
        theta = if secant > lo && secant < hi { secant } else { 0.5 * (lo + hi) };
        f = residual(theta)?;
    }
    if f.abs() > 1e3 * ROOT_TOLERANCE {
        return Err(Error::ProbeFailed(format!("root finding stalled at residual {f:e}")));
    }
    let g = <F::Bundle as PrincipalBundle>::Group::exp(&[theta]);
    Ok((b.act(&g, p), f.abs()))
}

/// Samples the horizontal slice through `q` and the orbit of `q` and
/// reports their minimum distance outside a small ball around `q`.
///
/// Only one-dimensional structure groups are supported. `budget` is the
/// number of samples of each kind.
pub fn slice_probe<F: ConnectionForm>(
    form: &F,
    q: &TotalOf<F::Bundle>,
    budget: usize,
    seed: u64,
) -> Result<SliceProbeReport> {
    let b = form.bundle();
    if b.dim_group() != 1 {
        return Err(Error::ProbeFailed("slice probe needs a one-dimensional group".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let center = b.project(q);
    let dim = b.dim_base();

    let mut slice = Vec::with_capacity(budget);
    let mut max_slice_residual: f64 = 0.0;
    let mut attempts = 0;
    while slice.len() < budget {
        attempts += 1;
        if attempts > 100 * budget {
            return Err(Error::ProbeFailed("could not place slice samples in the domain".into()));
        }
        let dir: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let norm = dir.iter().map(|x: &f64| x * x).sum::<f64>().sqrt();
        if norm < 1e-12 {
            continue;
        }
        let radius = rng.random_range(SLICE_RADII.0..SLICE_RADII.1);
        let coords: Vec<f64> = dir.iter().map(|x| x * radius / norm).collect();
        let r = b.base_chart(&center, &coords);
        let Ok(p) = b.fiber_point(&r) else { continue };
        if !form.in_domain(q, &p) {
            continue;
        }
        let (s, res) = solve_slice_point(form, q, &p)?;
        max_slice_residual = max_slice_residual.max(res);
        if b.total_distance(&s, q) > EXCLUSION_RADIUS {
            slice.push(s);
        }
    }

    let orbit: Vec<_> = (0..budget)
        .map(|k| {
            let theta = -PI + 2.0 * PI * (k as f64 + 0.5) / budget as f64;
            b.act(&<F::Bundle as PrincipalBundle>::Group::exp(&[theta]), q)
        })
        .filter(|o| b.total_distance(o, q) > EXCLUSION_RADIUS)
        .collect();

    let min_separation = slice
        .iter()
        .flat_map(|s| orbit.iter().map(move |o| (s, o)))
        .map(|(s, o)| b.total_distance(s, o))
        .reduce(f64::min);
    Ok(SliceProbeReport {
        slice_samples: slice.len(),
        orbit_samples: orbit.len(),
        min_separation,
        threshold: DEFAULT_SEPARATION,
        max_slice_residual,
        separated: min_separation.is_none_or(|d| d > DEFAULT_SEPARATION),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangentSplitReport {
    pub dim_total: usize,
    pub dim_group: usize,
    /// Rank of slice and orbit tangents together.
    pub rank: usize,
    /// Rank of the slice tangents alone.
    pub rank_without_orbit: usize,
    pub singular_values: Vec<f64>,
    pub transversal: bool,
}

fn numerical_rank(columns: &[Vec<f64>]) -> (usize, Vec<f64>) {
    if columns.is_empty() {
        return (0, Vec::new());
    }
    let rows = columns[0].len();
    let m = DMatrix::from_fn(rows, columns.len(), |i, j| columns[j][i]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let cutoff = RANK_CUTOFF * sv.first().copied().unwrap_or(0.0);
    (sv.iter().filter(|&&s| s > cutoff).count(), sv)
}

/// Checks `T_q Hor²(q) ⊕ T_q V_d(q) = T_q Q` by central differences of
/// the slice parametrization `r ↦ lift(q, r)` and of the action at `e`.
pub fn tangent_split_check<F: ConnectionForm>(form: &F, q: &TotalOf<F::Bundle>) -> Result<TangentSplitReport> {
    let b = form.bundle();
    let lift = LiftFromForm::with_section(form, SectionChoice::AnyChart);
    let center = b.project(q);
    let central = |plus: Vec<f64>, minus: Vec<f64>| -> Vec<f64> {
        plus.iter().zip(&minus).map(|(p, m)| (p - m) / (2.0 * FD_STEP)).collect()
    };
    let unit = |n: usize, k: usize, s: f64| -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[k] = s;
        v
    };
    let probe_err = |e: Error| Error::ProbeFailed(format!("slice parametrization failed: {e}"));

    let mut slice_cols = Vec::new();
    for k in 0..b.dim_base() {
        let plus = lift.lift(q, &b.base_chart(&center, &unit(b.dim_base(), k, FD_STEP))).map_err(probe_err)?;
        let minus = lift.lift(q, &b.base_chart(&center, &unit(b.dim_base(), k, -FD_STEP))).map_err(probe_err)?;
        slice_cols.push(central(b.total_coords(&plus), b.total_coords(&minus)));
    }
    let mut all_cols = slice_cols.clone();
    for k in 0..b.dim_group() {
        let n = b.dim_group();
        let gp = <F::Bundle as PrincipalBundle>::Group::exp(&unit(n, k, FD_STEP));
        let gm = <F::Bundle as PrincipalBundle>::Group::exp(&unit(n, k, -FD_STEP));
        all_cols.push(central(b.total_coords(&b.act(&gp, q)), b.total_coords(&b.act(&gm, q))));
    }
    let (rank, singular_values) = numerical_rank(&all_cols);
    let (rank_without_orbit, _) = numerical_rank(&slice_cols);
    Ok(TangentSplitReport {
        dim_total: b.dim_total(),
        dim_group: b.dim_group(),
        rank,
        rank_without_orbit,
        singular_values,
        transversal: rank == b.dim_total(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::CircleElement;
    use crate::bundle::{TrivialBundle, TrivialPoint};
    use crate::connection::{trivial_form_from_c, BasePairDomain, CFamily};

    #[test]
    fn trivial_slice_is_separated() {
        for c in [CFamily::Identity, CFamily::Linear { alpha: 1.3, functional: vec![1.0, -0.5] }] {
            let form = trivial_form_from_c(TrivialBundle::new(2), c, BasePairDomain::Everywhere).unwrap();
            let q = TrivialPoint::new(vec![0.2, -0.4], CircleElement::from_angle(1.0));
            let report = slice_probe(&form, &q, 64, 7).unwrap();
            assert_eq!(report.slice_samples, 64);
            assert!(report.separated, "{report:?}");
            assert!(report.max_slice_residual <= 1e-12);
        }
    }

    #[test]
    fn zero_budget_is_vacuous() {
        let form = trivial_form_from_c(TrivialBundle::new(1), CFamily::Identity, BasePairDomain::Everywhere).unwrap();
        let q = TrivialPoint::new(vec![0.0], CircleElement::IDENTITY);
        let report = slice_probe(&form, &q, 0, 1).unwrap();
        assert_eq!(report.slice_samples + report.orbit_samples, 0);
        assert_eq!(report.min_separation, None);
        assert!(report.separated);
    }

    #[test]
    fn trivial_tangent_split() {
        for n in 1..=3 {
            let c = CFamily::Linear { alpha: 0.7, functional: vec![1.0; n] };
            let form = trivial_form_from_c(TrivialBundle::new(n), c, BasePairDomain::Everywhere).unwrap();
            let q = TrivialPoint::new(vec![0.3; n], CircleElement::from_angle(-2.5));
            let report = tangent_split_check(&form, &q).unwrap();
            assert!(report.transversal);
            assert_eq!(report.rank, n + 1);
            assert_eq!(report.rank_without_orbit, n);
        }
    }
}
