use super::{ConnectionForm, GroupOf, TotalOf};
use crate::algebra::LieGroup;
use crate::bundle::PrincipalBundle;
use crate::error::Result;

/// Pairs whose form value lies within this group distance of `e` count as
/// horizontal.
pub const HORIZONTAL_TOLERANCE: f64 = 1e-8;

/// `q1 = g · h1` with `(q0, h1)` horizontal.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<B: PrincipalBundle> {
    /// Vertical factor.
    pub g: B::Group,
    /// Second slot of the horizontal pair.
    pub h1: B::Total,
}

/// Splits `(q0, q1)` into a vertical translation and a horizontal pair.
pub fn decompose_pair<F: ConnectionForm>(
    form: &F,
    q0: &TotalOf<F::Bundle>,
    q1: &TotalOf<F::Bundle>,
) -> Result<Decomposition<F::Bundle>> {
    let g: GroupOf<F::Bundle> = form.evaluate(q0, q1)?;
    let h1 = form.bundle().act(&g.inverse(), q1);
    Ok(Decomposition { g, h1 })
}

pub fn is_horizontal<F: ConnectionForm>(
    form: &F,
    q0: &TotalOf<F::Bundle>,
    q1: &TotalOf<F::Bundle>,
) -> Result<bool> {
    let g = form.evaluate(q0, q1)?;
    Ok(g.distance(&LieGroup::identity()) <= HORIZONTAL_TOLERANCE)
}
