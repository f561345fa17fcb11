//! Discrete connections on principal bundles.
//!
//! The crate models principal `G`-bundles `π: Q → Q/G` (the Hopf bundle
//! `S³ → S²` and trivial bundles `ℝⁿ × U(1)`), discrete connection forms
//! and discrete horizontal lifts on them, constructions of forms from
//! Riemannian geodesics, and a seeded Monte-Carlo verifier for the
//! connection axioms.
//!
//! ```
//! use disconn_core::prelude::*;
//!
//! let form = hopf_closed_form();
//! let q0 = UnitQuaternion::ONE;
//! let q1 = UnitQuaternion::I;
//! assert_eq!(form.evaluate(&q0, &q1).unwrap().angle(), std::f64::consts::FRAC_PI_2);
//! ```

pub mod algebra;
pub mod bundle;
pub mod connection;
mod error;
pub mod riemannian;
pub mod verify;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::algebra::{canonical_angle, Basis, CircleElement, LieGroup, Quaternion, UnitQuaternion};
    pub use crate::bundle::{FiberPair, HopfBundle, PrincipalBundle, S2Point, TrivialBundle, TrivialPoint};
    pub use crate::connection::{
        form_from_lift, lift_from_form, trivial_form_from_c, trivial_lift_from_c, BasePairDomain, CFamily,
        ConnectionForm, HorizontalLift, Provenance, SectionChoice,
    };
    pub use crate::riemannian::{hopf_closed_form, lmw_form, riemannian_form, DEFAULT_STEPS};
    pub use crate::verify::{check_axioms, compare_forms, counterexample_sweep, Axiom, SampleConfig, Verdict};
    pub use crate::{Error, Result};
}
