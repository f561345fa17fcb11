//! Discrete connection forms and discrete horizontal lifts.
//!
//! A discrete connection form `A_d` assigns a group element to each pair
//! `(q0, q1)` in an open `G×G`-invariant neighbourhood of the diagonal,
//! with `A_d(q, q) = e` and `A_d(g0·q0, g1·q1) = g1 A_d(q0, q1) g0⁻¹`.
//! Its horizontal set is the level set `A_d = e`. A discrete horizontal
//! lift maps `(q0, r1)` to the unique `q1` over `r1` with `(q0, q1)`
//! horizontal. [`LiftFromForm`] and [`FormFromLift`] convert between the
//! two descriptions.

mod decompose;
mod lift;
mod probe;
mod reduced;
mod trivial;

pub use decompose::{decompose_pair, is_horizontal, Decomposition, HORIZONTAL_TOLERANCE};
pub use lift::{form_from_lift, lift_from_form, FormFromLift, LiftFromForm, SectionChoice};
pub use probe::{
    slice_probe, tangent_split_check, SliceProbeReport, TangentSplitReport, DEFAULT_SEPARATION,
};
pub use reduced::{alpha_inverse, alpha_map, ReducedPair};
pub use trivial::{
    trivial_form_from_c, trivial_lift_from_c, BasePairDomain, CFamily, TrivialCForm, TrivialCLift,
};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bundle::PrincipalBundle;
use crate::error::{Error, Result};

pub type TotalOf<B> = <B as PrincipalBundle>::Total;
pub type BaseOf<B> = <B as PrincipalBundle>::Base;
pub type GroupOf<B> = <B as PrincipalBundle>::Group;

/// Where a form or lift came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    CBuilt,
    GeodesicBuilt,
    /// Geodesic-in-Q construction; not a discrete connection form.
    LmwVariant,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::ClosedForm => "closed-form",
            Self::CBuilt => "c-built",
            Self::GeodesicBuilt => "geodesic-built",
            Self::LmwVariant => "lmw-variant",
        }
    }

    /// `false` for constructions known to violate the connection axioms.
    pub fn is_connection(self) -> bool {
        !matches!(self, Self::LmwVariant)
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A group-valued function on pairs of total-space points.
pub trait ConnectionForm: Send + Sync {
    type Bundle: PrincipalBundle;

    fn bundle(&self) -> &Self::Bundle;

    fn provenance(&self) -> Provenance;

    /// Integration step count, for numerically integrated forms.
    fn steps(&self) -> Option<usize> {
        None
    }

    fn in_domain(&self, q0: &TotalOf<Self::Bundle>, q1: &TotalOf<Self::Bundle>) -> bool;

    /// Value at a pair already known to be in the domain.
    fn compute(
        &self,
        q0: &TotalOf<Self::Bundle>,
        q1: &TotalOf<Self::Bundle>,
    ) -> Result<GroupOf<Self::Bundle>>;

    fn evaluate(
        &self,
        q0: &TotalOf<Self::Bundle>,
        q1: &TotalOf<Self::Bundle>,
    ) -> Result<GroupOf<Self::Bundle>> {
        if !self.in_domain(q0, q1) {
            return Err(Error::OutOfDomain);
        }
        self.compute(q0, q1)
    }
}

/// A map `(q0, r1) ↦ q1` with `π(q1) = r1`.
pub trait HorizontalLift: Send + Sync {
    type Bundle: PrincipalBundle;

    fn bundle(&self) -> &Self::Bundle;

    fn provenance(&self) -> Provenance;

    fn in_domain(&self, q0: &TotalOf<Self::Bundle>, r1: &BaseOf<Self::Bundle>) -> bool;

    /// Lift of a pair already known to be in the domain.
    fn compute(
        &self,
        q0: &TotalOf<Self::Bundle>,
        r1: &BaseOf<Self::Bundle>,
    ) -> Result<TotalOf<Self::Bundle>>;

    fn lift(
        &self,
        q0: &TotalOf<Self::Bundle>,
        r1: &BaseOf<Self::Bundle>,
    ) -> Result<TotalOf<Self::Bundle>> {
        if !self.in_domain(q0, r1) {
            return Err(Error::OutOfDomain);
        }
        self.compute(q0, r1)
    }
}

macro_rules! forward_form {
    ($f:ident => $($ptr:ty),*) => {$(
        impl<$f: ConnectionForm + ?Sized> ConnectionForm for $ptr {
            type Bundle = $f::Bundle;
            fn bundle(&self) -> &Self::Bundle {
                (**self).bundle()
            }
            fn provenance(&self) -> Provenance {
                (**self).provenance()
            }
            fn steps(&self) -> Option<usize> {
                (**self).steps()
            }
            fn in_domain(&self, q0: &TotalOf<$f::Bundle>, q1: &TotalOf<$f::Bundle>) -> bool {
                (**self).in_domain(q0, q1)
            }
            fn compute(
                &self,
                q0: &TotalOf<$f::Bundle>,
                q1: &TotalOf<$f::Bundle>,
            ) -> Result<GroupOf<$f::Bundle>> {
                (**self).compute(q0, q1)
            }
        }
    )*};
}

macro_rules! forward_lift {
    ($l:ident => $($ptr:ty),*) => {$(
        impl<$l: HorizontalLift + ?Sized> HorizontalLift for $ptr {
            type Bundle = $l::Bundle;
            fn bundle(&self) -> &Self::Bundle {
                (**self).bundle()
            }
            fn provenance(&self) -> Provenance {
                (**self).provenance()
            }
            fn in_domain(&self, q0: &TotalOf<$l::Bundle>, r1: &BaseOf<$l::Bundle>) -> bool {
                (**self).in_domain(q0, r1)
            }
            fn compute(
                &self,
                q0: &TotalOf<$l::Bundle>,
                r1: &BaseOf<$l::Bundle>,
            ) -> Result<TotalOf<$l::Bundle>> {
                (**self).compute(q0, r1)
            }
        }
    )*};
}

forward_form!(F => &F, Box<F>, Arc<F>);
forward_lift!(L => &L, Box<L>, Arc<L>);
