use std::fmt;
use std::sync::Arc;

use super::{BaseOf, ConnectionForm, GroupOf, HorizontalLift, Provenance, TotalOf};
use crate::algebra::LieGroup;
use crate::bundle::PrincipalBundle;
use crate::error::Result;

/// Base-distance tolerance when translating a lifted point into `q1`.
const LIFT_FIBER_TOLERANCE: f64 = 1e-6;

type SectionFn<B> = dyn Fn(&B, &BaseOf<B>) -> Result<TotalOf<B>> + Send + Sync;

/// Which local section a [`LiftFromForm`] uses to reach the target fiber.
pub enum SectionChoice<B: PrincipalBundle> {
    /// [`PrincipalBundle::local_section`].
    Canonical,
    /// [`PrincipalBundle::fiber_point`], which may switch charts.
    AnyChart,
    Custom(Arc<SectionFn<B>>),
}

impl<B: PrincipalBundle> SectionChoice<B> {
    pub fn custom(f: impl Fn(&B, &BaseOf<B>) -> Result<TotalOf<B>> + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    fn point_over(&self, bundle: &B, r: &BaseOf<B>) -> Result<TotalOf<B>> {
        match self {
            Self::Canonical => bundle.local_section(r),
            Self::AnyChart => bundle.fiber_point(r),
            Self::Custom(f) => f(bundle, r),
        }
    }
}

impl<B: PrincipalBundle> Clone for SectionChoice<B> {
    fn clone(&self) -> Self {
        match self {
            Self::Canonical => Self::Canonical,
            Self::AnyChart => Self::AnyChart,
            Self::Custom(f) => Self::Custom(Arc::clone(f)),
        }
    }
}

impl<B: PrincipalBundle> fmt::Debug for SectionChoice<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Canonical => f.write_str("Canonical"),
            Self::AnyChart => f.write_str("AnyChart"),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// The horizontal lift of a connection form:
/// `lift(q0, r1) = A(q0, σ(r1))⁻¹ · σ(r1)`.
#[derive(Clone, Debug)]
pub struct LiftFromForm<F: ConnectionForm> {
    form: F,
    section: SectionChoice<F::Bundle>,
}

impl<F: ConnectionForm> LiftFromForm<F> {
    pub fn new(form: F) -> Self {
        Self { form, section: SectionChoice::Canonical }
    }

    pub fn with_section(form: F, section: SectionChoice<F::Bundle>) -> Self {
        Self { form, section }
    }

    pub fn form(&self) -> &F {
        &self.form
    }
}

pub fn lift_from_form<F: ConnectionForm>(form: F) -> LiftFromForm<F> {
    LiftFromForm::new(form)
}

impl<F: ConnectionForm> HorizontalLift for LiftFromForm<F> {
    type Bundle = F::Bundle;

    fn bundle(&self) -> &F::Bundle {
        self.form.bundle()
    }

    fn provenance(&self) -> Provenance {
        self.form.provenance()
    }

    fn in_domain(&self, q0: &TotalOf<F::Bundle>, r1: &BaseOf<F::Bundle>) -> bool {
        match self.section.point_over(self.bundle(), r1) {
            Ok(s) => self.form.in_domain(q0, &s),
            Err(_) => false,
        }
    }

    fn compute(&self, q0: &TotalOf<F::Bundle>, r1: &BaseOf<F::Bundle>) -> Result<TotalOf<F::Bundle>> {
        let s = self.section.point_over(self.bundle(), r1)?;
        let g = self.form.evaluate(q0, &s)?;
        Ok(self.bundle().act(&g.inverse(), &s))
    }

    /// Unlike the provided default, propagates section failures as such
    /// instead of folding them into `OutOfDomain`.
    fn lift(&self, q0: &TotalOf<F::Bundle>, r1: &BaseOf<F::Bundle>) -> Result<TotalOf<F::Bundle>> {
        self.compute(q0, r1)
    }
}

/// The connection form of a horizontal lift:
/// `A(q0, q1) = κ(lift(q0, π(q1)), q1)`.
#[derive(Clone, Debug)]
pub struct FormFromLift<L: HorizontalLift> {
    lift: L,
}

impl<L: HorizontalLift> FormFromLift<L> {
    pub fn new(lift: L) -> Self {
        Self { lift }
    }

    pub fn lift(&self) -> &L {
        &self.lift
    }
}

pub fn form_from_lift<L: HorizontalLift>(lift: L) -> FormFromLift<L> {
    FormFromLift::new(lift)
}

impl<L: HorizontalLift> ConnectionForm for FormFromLift<L> {
    type Bundle = L::Bundle;

    fn bundle(&self) -> &L::Bundle {
        self.lift.bundle()
    }

    fn provenance(&self) -> Provenance {
        self.lift.provenance()
    }

    fn in_domain(&self, q0: &TotalOf<L::Bundle>, q1: &TotalOf<L::Bundle>) -> bool {
        self.lift.in_domain(q0, &self.bundle().project(q1))
    }

    fn compute(&self, q0: &TotalOf<L::Bundle>, q1: &TotalOf<L::Bundle>) -> Result<GroupOf<L::Bundle>> {
        let b = self.bundle();
        let h = self.lift.lift(q0, &b.project(q1))?;
        b.kappa_within(&h, q1, LIFT_FIBER_TOLERANCE)
    }
}
