//! Principal bundles: projection, group action, fiber translation and
//! local sections.

mod hopf;
mod trivial;

pub use hopf::{HopfBundle, S2Point};
pub use trivial::{TrivialBundle, TrivialPoint};

use std::fmt::Debug;

use crate::algebra::LieGroup;
use crate::error::{Error, Result};

/// Base-distance tolerance for the fiber checks of [`PrincipalBundle::kappa`].
pub const FIBER_TOLERANCE: f64 = 1e-9;

/// A principal `G`-bundle `π: Q → Q/G` with a left action of `G` on `Q`.
///
/// Points of both `Q` and `Q/G` have an embedding into some ℝᵐ
/// (`total_coords`, `base_coords`); distances are the Euclidean distances
/// in those embeddings.
pub trait PrincipalBundle: Clone + Debug + Send + Sync {
    type Total: Clone + Debug + PartialEq + Send + Sync;
    type Base: Clone + Debug + PartialEq + Send + Sync;
    type Group: LieGroup;

    /// Short identifier used in reports, e.g. `hopf` or `trivial(n=2)`.
    fn name(&self) -> String;

    fn dim_base(&self) -> usize;

    fn dim_group(&self) -> usize {
        Self::Group::DIM
    }

    fn dim_total(&self) -> usize {
        self.dim_base() + self.dim_group()
    }

    fn project(&self, q: &Self::Total) -> Self::Base;

    fn act(&self, g: &Self::Group, q: &Self::Total) -> Self::Total;

    /// Fiber translation: the `g` with `act(g, q0) = q1`, accepting pairs
    /// whose base points are within `tol` of each other.
    fn kappa_within(&self, q0: &Self::Total, q1: &Self::Total, tol: f64) -> Result<Self::Group>;

    fn kappa(&self, q0: &Self::Total, q1: &Self::Total) -> Result<Self::Group> {
        self.kappa_within(q0, q1, FIBER_TOLERANCE)
    }

    /// The canonical local section σ.
    fn local_section(&self, r: &Self::Base) -> Result<Self::Total>;

    /// Some point over `r`, possibly from a different chart than
    /// [`Self::local_section`]. Deterministic in `r`.
    fn fiber_point(&self, r: &Self::Base) -> Result<Self::Total> {
        self.local_section(r)
    }

    fn total_distance(&self, a: &Self::Total, b: &Self::Total) -> f64;

    fn base_distance(&self, a: &Self::Base, b: &Self::Base) -> f64;

    fn total_coords(&self, q: &Self::Total) -> Vec<f64>;

    fn total_from_coords(&self, coords: &[f64]) -> Result<Self::Total>;

    fn base_coords(&self, r: &Self::Base) -> Vec<f64>;

    fn base_from_coords(&self, coords: &[f64]) -> Result<Self::Base>;

    /// Local chart of the base centred at `center`, taking `dim_base`
    /// coordinates; `base_chart(center, 0) = center`.
    fn base_chart(&self, center: &Self::Base, coords: &[f64]) -> Self::Base;
}

/// A pair of total-space points lying over the same base point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberPair<B: PrincipalBundle> {
    pub q0: B::Total,
    pub q1: B::Total,
}

impl<B: PrincipalBundle> FiberPair<B> {
    pub fn new(bundle: &B, q0: B::Total, q1: B::Total) -> Result<Self> {
        let distance = bundle.base_distance(&bundle.project(&q0), &bundle.project(&q1));
        if distance > FIBER_TOLERANCE {
            return Err(Error::NotSameFiber { distance });
        }
        Ok(Self { q0, q1 })
    }

    /// The group element carrying `q0` to `q1`.
    pub fn translation(&self, bundle: &B) -> Result<B::Group> {
        bundle.kappa(&self.q0, &self.q1)
    }
}

pub(crate) fn check_len(coords: &[f64], expected: usize) -> Result<()> {
    if coords.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: coords.len() });
    }
    Ok(())
}
