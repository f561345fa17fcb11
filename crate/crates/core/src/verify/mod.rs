//! Monte-Carlo checks of the discrete connection axioms.
//!
//! [`check_axioms`] samples each axiom independently from seeded streams
//! and reports, per axiom, the largest violation seen and the input that
//! produced it. Violations are measured in the group metric (form axioms)
//! or in the total/base embedding (lift axioms). Recorded inputs are
//! coordinate vectors; every violation is computed from the decoded
//! coordinates, so [`reevaluate`] reproduces it bit for bit.

mod sampling;
mod sweep;

pub use sampling::{
    sample_pair, sample_rng, stream_id, uniform_angle, uniform_s2, SampleSpace, MAX_ATTEMPTS,
    TRIVIAL_BOX_HALF_WIDTH,
};
pub use sweep::{counterexample_sweep, theta_grid, SweepRow, SweepTable, DERIVATIVE_STEP};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::LieGroup;
use crate::bundle::PrincipalBundle;
use crate::connection::{
    form_from_lift, lift_from_form, ConnectionForm, GroupOf, HorizontalLift, Provenance,
};
use crate::error::{Error, Result};

/// Version tag written into every report.
pub const ARTIFACT_VERSION: &str = concat!("disconn-", env!("CARGO_PKG_VERSION"));

/// Default tolerance for closed-form and C-built forms.
pub const EXACT_TOLERANCE: f64 = 1e-9;
/// Default tolerance for numerically integrated forms.
pub const INTEGRATED_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `A(q, q) = e`.
    Normalization,
    /// `(q, q)` lies in the domain.
    DiagonalDomain,
    /// The domain is `G×G`-invariant.
    DomainInvariance,
    /// `A(g0 q0, g1 q1) = g1 A(q0, q1) g0⁻¹`.
    Equivariance,
    /// `π(L(q0, r1)) = r1`.
    LiftSection,
    /// `L(g q0, r1) = g L(q0, r1)`.
    LiftEquivariance,
    /// `L(q0, π(q0)) = q0`.
    LiftNormalization,
    /// The form is recovered from its own lift.
    FormRoundTrip,
    /// The lift is recovered from the form it induces.
    LiftRoundTrip,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Normalization,
        Axiom::DiagonalDomain,
        Axiom::DomainInvariance,
        Axiom::Equivariance,
        Axiom::LiftSection,
        Axiom::LiftEquivariance,
        Axiom::LiftNormalization,
        Axiom::FormRoundTrip,
        Axiom::LiftRoundTrip,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Normalization => "normalization",
            Self::DiagonalDomain => "diagonal_domain",
            Self::DomainInvariance => "domain_invariance",
            Self::Equivariance => "equivariance",
            Self::LiftSection => "lift_section",
            Self::LiftEquivariance => "lift_equivariance",
            Self::LiftNormalization => "lift_normalization",
            Self::FormRoundTrip => "form_round_trip",
            Self::LiftRoundTrip => "lift_round_trip",
        }
    }

    fn index(self) -> usize {
        Self::ALL.iter().position(|&a| a == self).expect("listed")
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Axiom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.id() == s)
            .ok_or_else(|| Error::UnknownAxiom(s.to_owned()))
    }
}

/// Sampling parameters for [`check_axioms`] and [`compare_forms`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampleConfig {
    pub seed: u64,
    pub n_samples: usize,
    /// Overrides the provenance default for every axiom.
    pub tolerance: Option<f64>,
    /// Per-axiom tolerances, taking precedence over `tolerance`.
    pub overrides: BTreeMap<Axiom, f64>,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self { seed: 0, n_samples: 1000, tolerance: None, overrides: BTreeMap::new() }
    }
}

impl SampleConfig {
    pub fn new(seed: u64, n_samples: usize) -> Self {
        Self { seed, n_samples, ..Self::default() }
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = Some(tolerance);
        self
    }

    pub fn tolerance_for(&self, axiom: Axiom, provenance: Provenance) -> f64 {
        if let Some(&t) = self.overrides.get(&axiom) {
            return t;
        }
        self.tolerance.unwrap_or_else(|| default_tolerance(provenance))
    }
}

pub fn default_tolerance(provenance: Provenance) -> f64 {
    match provenance {
        Provenance::ClosedForm | Provenance::CBuilt => EXACT_TOLERANCE,
        Provenance::GeodesicBuilt | Provenance::LmwVariant => INTEGRATED_TOLERANCE,
    }
}

/// A sampled input in coordinates: total points via `total_coords`,
/// group elements via `log`, base points via `base_coords`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorstInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g1: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<Vec<f64>>,
}

struct Draw<B: PrincipalBundle> {
    q0: Option<B::Total>,
    q1: Option<B::Total>,
    g0: Option<B::Group>,
    g1: Option<B::Group>,
    r1: Option<B::Base>,
}

impl<B: PrincipalBundle> Default for Draw<B> {
    fn default() -> Self {
        Self { q0: None, q1: None, g0: None, g1: None, r1: None }
    }
}

impl<B: PrincipalBundle> Draw<B> {
    fn encode(&self, b: &B) -> WorstInput {
        WorstInput {
            q0: self.q0.as_ref().map(|q| b.total_coords(q)),
            q1: self.q1.as_ref().map(|q| b.total_coords(q)),
            g0: self.g0.as_ref().map(|g| g.log()),
            g1: self.g1.as_ref().map(|g| g.log()),
            r1: self.r1.as_ref().map(|r| b.base_coords(r)),
        }
    }

    fn decode(b: &B, w: &WorstInput) -> Result<Self> {
        let group = |c: &Vec<f64>| -> Result<B::Group> {
            if c.len() != B::Group::DIM {
                return Err(Error::DimensionMismatch { expected: B::Group::DIM, got: c.len() });
            }
            Ok(B::Group::exp(c))
        };
        Ok(Self {
            q0: w.q0.as_ref().map(|c| b.total_from_coords(c)).transpose()?,
            q1: w.q1.as_ref().map(|c| b.total_from_coords(c)).transpose()?,
            g0: w.g0.as_ref().map(group).transpose()?,
            g1: w.g1.as_ref().map(group).transpose()?,
            r1: w.r1.as_ref().map(|c| b.base_from_coords(c)).transpose()?,
        })
    }
}

fn need<T>(x: &Option<T>, field: &str) -> Result<T>
where
    T: Clone,
{
    x.clone().ok_or_else(|| Error::ProbeFailed(format!("input is missing `{field}`")))
}

/// Result of checking one axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomRecord {
    pub id: Axiom,
    /// Samples that were evaluated.
    pub samples: usize,
    /// Samples whose violation exceeded the tolerance or whose evaluation
    /// raised an error.
    pub failures: usize,
    /// Evaluations that raised an error (counted in `failures`).
    pub errors: usize,
    /// Samples abandoned after [`MAX_ATTEMPTS`] rejected draws.
    pub skipped: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub worst_input: Option<WorstInput>,
    /// First evaluation error message, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_error: Option<String>,
}

impl AxiomRecord {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub artifact_version: String,
    pub bundle: String,
    pub form_provenance: Provenance,
    pub is_connection: bool,
    pub seed: u64,
    pub n_samples: usize,
    pub steps: Option<usize>,
    /// Draws rejected because they fell outside the relevant domain.
    pub resampled_draws: usize,
    pub axioms: Vec<AxiomRecord>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn axiom(&self, axiom: Axiom) -> Option<&AxiomRecord> {
        self.axioms.iter().find(|a| a.id == axiom)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    /// One line per axiom followed by the verdict.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "bundle {} form {} seed {} samples {}\n",
            self.bundle, self.form_provenance, self.seed, self.n_samples
        );
        for a in &self.axioms {
            out.push_str(&format!(
                "{:<20} {:>6} samples {:>6} failures  max {:.3e}  tol {:.1e}\n",
                a.id.id(),
                a.samples,
                a.failures,
                a.max_violation,
                a.tolerance
            ));
        }
        out.push_str(&format!(
            "resampled draws {}\nverdict {}\n",
            self.resampled_draws,
            match self.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "fail",
            }
        ));
        out
    }
}

enum Outcome {
    Value(f64),
    Error(String),
}

struct SampleResult {
    resampled: usize,
    evaluated: Option<(Outcome, WorstInput)>,
}

fn indicator(fail: bool) -> f64 {
    if fail {
        1.0
    } else {
        0.0
    }
}

fn sample_single<B: SampleSpace>(
    b: &B,
    rng: &mut ChaCha8Rng,
    resampled: &mut usize,
    accept: impl Fn(&B::Total) -> bool,
) -> Option<B::Total> {
    for _ in 0..MAX_ATTEMPTS {
        let q = b.sample_total(rng);
        if accept(&q) {
            return Some(q);
        }
        *resampled += 1;
    }
    None
}

/// Draws the input of one sample of `axiom`.
fn draw<F>(form: &F, axiom: Axiom, rng: &mut ChaCha8Rng, resampled: &mut usize) -> Option<Draw<F::Bundle>>
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let b = form.bundle();
    let lift = lift_from_form(form);
    let lift_pair = |rng: &mut ChaCha8Rng, resampled: &mut usize, second: Option<&dyn HorizontalLift<Bundle = F::Bundle>>| {
        sample_pair(b, rng, resampled, |q0, q1| {
            let r1 = b.project(q1);
            lift.in_domain(q0, &r1) && second.is_none_or(|l| l.in_domain(q0, &r1))
        })
        .map(|(q0, q1)| (q0, b.project(&q1)))
    };
    let mut d = Draw::default();
    match axiom {
        Axiom::Normalization | Axiom::DiagonalDomain => {
            d.q0 = Some(b.sample_total(rng));
        }
        Axiom::DomainInvariance => {
            let (q0, q1) = sample_pair(b, rng, resampled, |_, _| true)?;
            d.q0 = Some(q0);
            d.q1 = Some(q1);
            d.g0 = Some(b.sample_group(rng));
            d.g1 = Some(b.sample_group(rng));
        }
        Axiom::Equivariance => {
            let (q0, q1) = sample_pair(b, rng, resampled, |a, c| form.in_domain(a, c))?;
            d.q0 = Some(q0);
            d.q1 = Some(q1);
            d.g0 = Some(b.sample_group(rng));
            d.g1 = Some(b.sample_group(rng));
        }
        Axiom::LiftSection => {
            let (q0, r1) = lift_pair(rng, resampled, None)?;
            d.q0 = Some(q0);
            d.r1 = Some(r1);
        }
        Axiom::LiftEquivariance => {
            let (q0, r1) = lift_pair(rng, resampled, None)?;
            d.q0 = Some(q0);
            d.r1 = Some(r1);
            d.g0 = Some(b.sample_group(rng));
        }
        Axiom::LiftNormalization => {
            d.q0 = Some(sample_single(b, rng, resampled, |q| lift.in_domain(q, &b.project(q)))?);
        }
        Axiom::FormRoundTrip => {
            let back = form_from_lift(lift_from_form(form));
            let (q0, q1) =
                sample_pair(b, rng, resampled, |a, c| form.in_domain(a, c) && back.in_domain(a, c))?;
            d.q0 = Some(q0);
            d.q1 = Some(q1);
        }
        Axiom::LiftRoundTrip => {
            let again = lift_from_form(form_from_lift(lift_from_form(form)));
            let (q0, r1) = lift_pair(rng, resampled, Some(&again))?;
            d.q0 = Some(q0);
            d.r1 = Some(r1);
        }
    }
    Some(d)
}

/// Violation of `axiom` at a decoded input.
fn violation<F: ConnectionForm>(form: &F, axiom: Axiom, d: &Draw<F::Bundle>) -> Result<f64> {
    let b = form.bundle();
    let e = GroupOf::<F::Bundle>::identity();
    let lift = lift_from_form(form);
    match axiom {
        Axiom::Normalization => {
            let q = need(&d.q0, "q0")?;
            Ok(form.evaluate(&q, &q)?.distance(&e))
        }
        Axiom::DiagonalDomain => {
            let q = need(&d.q0, "q0")?;
            Ok(indicator(!form.in_domain(&q, &q)))
        }
        Axiom::DomainInvariance => {
            let (q0, q1) = (need(&d.q0, "q0")?, need(&d.q1, "q1")?);
            let (g0, g1) = (need(&d.g0, "g0")?, need(&d.g1, "g1")?);
            let moved = form.in_domain(&b.act(&g0, &q0), &b.act(&g1, &q1));
            Ok(indicator(moved != form.in_domain(&q0, &q1)))
        }
        Axiom::Equivariance => {
            let (q0, q1) = (need(&d.q0, "q0")?, need(&d.q1, "q1")?);
            let (g0, g1) = (need(&d.g0, "g0")?, need(&d.g1, "g1")?);
            let lhs = form.evaluate(&b.act(&g0, &q0), &b.act(&g1, &q1))?;
            let rhs = g1.compose(&form.evaluate(&q0, &q1)?).compose(&g0.inverse());
            Ok(lhs.distance(&rhs))
        }
        Axiom::LiftSection => {
            let (q0, r1) = (need(&d.q0, "q0")?, need(&d.r1, "r1")?);
            Ok(b.base_distance(&b.project(&lift.lift(&q0, &r1)?), &r1))
        }
        Axiom::LiftEquivariance => {
            let (q0, r1, g) = (need(&d.q0, "q0")?, need(&d.r1, "r1")?, need(&d.g0, "g0")?);
            let lhs = lift.lift(&b.act(&g, &q0), &r1)?;
            let rhs = b.act(&g, &lift.lift(&q0, &r1)?);
            Ok(b.total_distance(&lhs, &rhs))
        }
        Axiom::LiftNormalization => {
            let q0 = need(&d.q0, "q0")?;
            Ok(b.total_distance(&lift.lift(&q0, &b.project(&q0))?, &q0))
        }
        Axiom::FormRoundTrip => {
            let (q0, q1) = (need(&d.q0, "q0")?, need(&d.q1, "q1")?);
            let back = form_from_lift(lift_from_form(form));
            Ok(form.evaluate(&q0, &q1)?.distance(&back.evaluate(&q0, &q1)?))
        }
        Axiom::LiftRoundTrip => {
            let (q0, r1) = (need(&d.q0, "q0")?, need(&d.r1, "r1")?);
            let again = lift_from_form(form_from_lift(lift_from_form(form)));
            Ok(b.total_distance(&lift.lift(&q0, &r1)?, &again.lift(&q0, &r1)?))
        }
    }
}

fn run_sample<F>(form: &F, axiom: Axiom, seed: u64, i: usize) -> SampleResult
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let mut rng = sample_rng(seed, stream_id(axiom.index(), i));
    let mut resampled = 0;
    let Some(d) = draw(form, axiom, &mut rng, &mut resampled) else {
        return SampleResult { resampled, evaluated: None };
    };
    let b = form.bundle();
    let input = d.encode(b);
    let outcome = match Draw::decode(b, &input).and_then(|d| violation(form, axiom, &d)) {
        Ok(v) => Outcome::Value(v),
        Err(e) => Outcome::Error(e.to_string()),
    };
    SampleResult { resampled, evaluated: Some((outcome, input)) }
}

fn check_axiom<F>(form: &F, axiom: Axiom, cfg: &SampleConfig) -> (AxiomRecord, usize)
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let tolerance = cfg.tolerance_for(axiom, form.provenance());
    let results: Vec<SampleResult> =
        (0..cfg.n_samples).into_par_iter().map(|i| run_sample(form, axiom, cfg.seed, i)).collect();

    let mut rec = AxiomRecord {
        id: axiom,
        samples: 0,
        failures: 0,
        errors: 0,
        skipped: 0,
        max_violation: 0.0,
        tolerance,
        worst_input: None,
        first_error: None,
    };
    let mut resampled = 0;
    // Sequential fold in sample order: ties keep the lowest index.
    for r in results {
        resampled += r.resampled;
        let Some((outcome, input)) = r.evaluated else {
            rec.skipped += 1;
            continue;
        };
        rec.samples += 1;
        match outcome {
            Outcome::Value(v) if v.is_finite() => {
                if v > tolerance {
                    rec.failures += 1;
                }
                if rec.worst_input.is_none() || v > rec.max_violation {
                    rec.max_violation = v;
                    rec.worst_input = Some(input);
                }
            }
            Outcome::Value(v) => {
                rec.failures += 1;
                rec.errors += 1;
                rec.first_error.get_or_insert(format!("non-finite violation {v}"));
            }
            Outcome::Error(msg) => {
                rec.failures += 1;
                rec.errors += 1;
                rec.first_error.get_or_insert(msg);
            }
        }
    }
    (rec, resampled)
}

/// Checks `axioms` (all of them when empty) on `cfg.n_samples` samples each.
pub fn check_axioms<F>(form: &F, axioms: &[Axiom], cfg: &SampleConfig) -> VerificationReport
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let selected: &[Axiom] = if axioms.is_empty() { &Axiom::ALL } else { axioms };
    let mut records = Vec::with_capacity(selected.len());
    let mut resampled_draws = 0;
    for &axiom in selected {
        let (rec, resampled) = check_axiom(form, axiom, cfg);
        resampled_draws += resampled;
        records.push(rec);
    }
    let verdict = if records.iter().all(AxiomRecord::passed) { Verdict::Pass } else { Verdict::Fail };
    let provenance = form.provenance();
    VerificationReport {
        artifact_version: ARTIFACT_VERSION.to_owned(),
        bundle: form.bundle().name(),
        form_provenance: provenance,
        is_connection: provenance.is_connection(),
        seed: cfg.seed,
        n_samples: cfg.n_samples,
        steps: form.steps(),
        resampled_draws,
        axioms: records,
        verdict,
    }
}

/// Recomputes the violation of `axiom` at a recorded input.
pub fn reevaluate<F: ConnectionForm>(form: &F, axiom: Axiom, input: &WorstInput) -> Result<f64> {
    let d = Draw::decode(form.bundle(), input)?;
    violation(form, axiom, &d)
}

/// Maximum deviation between two forms on a shared sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub artifact_version: String,
    pub bundle: String,
    pub first: Provenance,
    pub second: Provenance,
    pub seed: u64,
    pub n_samples: usize,
    /// Samples that landed in both domains.
    pub samples: usize,
    pub resampled_draws: usize,
    pub max_deviation: f64,
    pub mean_deviation: f64,
    pub worst_input: Option<WorstInput>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        format!(
            "{} vs {} on {}: {} samples, max deviation {:.3e}, mean {:.3e}\n",
            self.first, self.second, self.bundle, self.samples, self.max_deviation, self.mean_deviation
        )
    }
}

/// Rejected draws and, unless skipped, the deviation with its input.
type CompareSample = (usize, Option<(Result<f64>, WorstInput)>);

/// Samples pairs in the intersection of both domains and records the
/// group distance `|A(q0, q1) · B(q0, q1)⁻¹|`.
pub fn compare_forms<F, G>(a: &F, b: &G, cfg: &SampleConfig) -> Result<ComparisonReport>
where
    F: ConnectionForm,
    G: ConnectionForm<Bundle = F::Bundle>,
    F::Bundle: SampleSpace,
{
    let bundle = a.bundle();
    let results: Vec<CompareSample> = (0..cfg.n_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, stream_id(Axiom::ALL.len(), i));
            let mut resampled = 0;
            let pair = sample_pair(bundle, &mut rng, &mut resampled, |q0, q1| {
                a.in_domain(q0, q1) && b.in_domain(q0, q1)
            });
            let evaluated = pair.map(|(q0, q1)| {
                let d = Draw::<F::Bundle> { q0: Some(q0), q1: Some(q1), ..Draw::default() };
                let input = d.encode(bundle);
                let dev = Draw::decode(bundle, &input).and_then(|d| {
                    let (q0, q1) = (need(&d.q0, "q0")?, need(&d.q1, "q1")?);
                    Ok(a.evaluate(&q0, &q1)?.distance(&b.evaluate(&q0, &q1)?))
                });
                (dev, input)
            });
            (resampled, evaluated)
        })
        .collect();

    let mut samples = 0;
    let mut resampled_draws = 0;
    let mut max_deviation = 0.0;
    let mut total = 0.0;
    let mut worst_input = None;
    for (resampled, evaluated) in results {
        resampled_draws += resampled;
        let Some((dev, input)) = evaluated else { continue };
        let dev = dev?;
        samples += 1;
        total += dev;
        if dev > max_deviation || worst_input.is_none() {
            max_deviation = dev;
            worst_input = Some(input);
        }
    }
    if samples == 0 {
        return Err(Error::EmptyDomainIntersection);
    }
    Ok(ComparisonReport {
        artifact_version: ARTIFACT_VERSION.to_owned(),
        bundle: bundle.name(),
        first: a.provenance(),
        second: b.provenance(),
        seed: cfg.seed,
        n_samples: cfg.n_samples,
        samples,
        resampled_draws,
        max_deviation,
        mean_deviation: total / samples as f64,
        worst_input,
    })
}
