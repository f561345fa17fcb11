//! Identification of `(Q×Q)/G` with `(Q/G × Q/G) ×_{Q/G} G̃`, where
//! `G̃ = (Q×G)/G` is the adjoint bundle with `k·(q, h) = (k·q, k h k⁻¹)`.

use super::{BaseOf, ConnectionForm, GroupOf, HorizontalLift, LiftFromForm, TotalOf};
use crate::algebra::LieGroup;
use crate::bundle::PrincipalBundle;
use crate::error::Result;

/// Image of a `G`-orbit of pairs. The adjoint class is stored through its
/// representative with first slot `σ(r0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPair<B: PrincipalBundle> {
    pub r0: B::Base,
    pub r1: B::Base,
    pub point: B::Total,
    pub group: B::Group,
}

/// `[(q0, q1)] ↦ ((π q0, π q1), [(q0, A(q0, q1))])`.
pub fn alpha_map<F: ConnectionForm>(
    form: &F,
    q0: &TotalOf<F::Bundle>,
    q1: &TotalOf<F::Bundle>,
) -> Result<ReducedPair<F::Bundle>> {
    let b = form.bundle();
    let g = form.evaluate(q0, q1)?;
    let r0 = b.project(q0);
    let r1 = b.project(q1);
    let point = b.local_section(&r0)?;
    // q0 = k·σ(r0); move the class representative by k⁻¹.
    let k: GroupOf<F::Bundle> = b.kappa(&point, q0)?;
    let group = k.inverse().compose(&g).compose(&k);
    Ok(ReducedPair { r0, r1, point, group })
}

type Pair<B> = (TotalOf<B>, TotalOf<B>);

/// A pair in the orbit described by `rp`: `(σ(r0), g · lift(σ(r0), r1))`.
pub fn alpha_inverse<F: ConnectionForm>(
    form: &F,
    rp: &ReducedPair<F::Bundle>,
) -> Result<Pair<F::Bundle>> {
    let lift = LiftFromForm::new(form);
    let q0 = rp.point.clone();
    let r1: &BaseOf<F::Bundle> = &rp.r1;
    let h1 = lift.lift(&q0, r1)?;
    let q1 = form.bundle().act(&rp.group, &h1);
    Ok((q0, q1))
}
