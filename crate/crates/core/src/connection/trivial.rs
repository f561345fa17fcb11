//! Connections on trivial bundles `ℝⁿ × U(1)` built from a function
//! `C: ℝⁿ × ℝⁿ → U(1)` with `C(r, r) = e`.

use super::{ConnectionForm, HorizontalLift, Provenance};
use crate::algebra::{CircleElement, LieGroup};
use crate::bundle::{TrivialBundle, TrivialPoint};
use crate::error::{Error, Result};

const DIAGONAL_TOLERANCE: f64 = 1e-9;

/// Registry of admissible `C` functions.
#[derive(Debug, Clone, PartialEq)]
pub enum CFamily {
    /// `C ≡ e`.
    Identity,
    /// `C ≡ e^{iθ}`; only `θ = 0` passes validation.
    Constant { angle: f64 },
    /// `C(r0, r1) = exp(i α ⟨c, r1 − r0⟩)`.
    Linear { alpha: f64, functional: Vec<f64> },
}

impl CFamily {
    /// Looks a family up by name. `linear` takes `alpha, c1, …, cn`;
    /// with only `alpha` the functional defaults to `(1, …, 1)`.
    pub fn from_name(name: &str, params: &[f64], dim: usize) -> Result<Self> {
        match name {
            "identity" => {
                if !params.is_empty() {
                    return Err(Error::InvalidC("identity takes no parameters".into()));
                }
                Ok(Self::Identity)
            }
            "constant" => match params {
                [angle] => Ok(Self::Constant { angle: *angle }),
                _ => Err(Error::InvalidC("constant takes exactly one angle".into())),
            },
            "linear" => match params {
                [] => Err(Error::InvalidC("linear needs alpha[,c1,...,cn]".into())),
                [alpha] => Ok(Self::Linear { alpha: *alpha, functional: vec![1.0; dim] }),
                [alpha, rest @ ..] => Ok(Self::Linear { alpha: *alpha, functional: rest.to_vec() }),
            },
            other => Err(Error::InvalidC(format!("unknown C family `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Constant { .. } => "constant",
            Self::Linear { .. } => "linear",
        }
    }

    pub fn value(&self, r0: &[f64], r1: &[f64]) -> CircleElement {
        match self {
            Self::Identity => CircleElement::IDENTITY,
            Self::Constant { angle } => CircleElement::from_angle(*angle),
            Self::Linear { alpha, functional } => {
                let s: f64 = functional.iter().zip(r1.iter().zip(r0)).map(|(c, (b, a))| c * (b - a)).sum();
                CircleElement::from_angle(alpha * s)
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        if let Self::Linear { functional, .. } = self {
            if functional.len() != dim {
                return Err(Error::InvalidC(format!(
                    "functional has {} coefficients for a base of dimension {dim}",
                    functional.len()
                )));
            }
        }
        for r in diagonal_probe_points(dim) {
            let c = self.value(&r, &r);
            if c.distance(&CircleElement::IDENTITY) > DIAGONAL_TOLERANCE {
                return Err(Error::InvalidC(format!(
                    "C(r, r) = e^{{i{}}} at r = {r:?}",
                    c.angle()
                )));
            }
        }
        Ok(())
    }
}

/// Origin, ± unit vectors and the corners `±2·(1,…,1)`.
fn diagonal_probe_points(dim: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![0.0; dim], vec![2.0; dim], vec![-2.0; dim]];
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            pts.push(e);
        }
    }
    pts
}

/// Base pairs on which `C` is defined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePairDomain {
    Everywhere,
    /// Pairs with `|r1 − r0| < radius`.
    WithinDistance(f64),
}

impl BasePairDomain {
    pub fn contains(&self, r0: &[f64], r1: &[f64]) -> bool {
        match *self {
            Self::Everywhere => true,
            Self::WithinDistance(radius) => {
                r0.iter().zip(r1).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() < radius
            }
        }
    }
}

/// `A((r0, g0), (r1, g1)) = g1 · C(r0, r1) · g0⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivialCForm {
    bundle: TrivialBundle,
    c: CFamily,
    domain: BasePairDomain,
}

impl TrivialCForm {
    pub fn c(&self) -> &CFamily {
        &self.c
    }
}

pub fn trivial_form_from_c(bundle: TrivialBundle, c: CFamily, domain: BasePairDomain) -> Result<TrivialCForm> {
    c.validate(bundle.dim())?;
    Ok(TrivialCForm { bundle, c, domain })
}

fn fits(bundle: &TrivialBundle, r: &[f64]) -> bool {
    r.len() == bundle.dim()
}

impl ConnectionForm for TrivialCForm {
    type Bundle = TrivialBundle;

    fn bundle(&self) -> &TrivialBundle {
        &self.bundle
    }

    fn provenance(&self) -> Provenance {
        Provenance::CBuilt
    }

    fn in_domain(&self, q0: &TrivialPoint, q1: &TrivialPoint) -> bool {
        fits(&self.bundle, &q0.r) && fits(&self.bundle, &q1.r) && self.domain.contains(&q0.r, &q1.r)
    }

    fn compute(&self, q0: &TrivialPoint, q1: &TrivialPoint) -> Result<CircleElement> {
        Ok(q1.g * self.c.value(&q0.r, &q1.r) * q0.g.inverse())
    }
}

/// `lift((r0, g0), r1) = (r1, g0 · C(r0, r1)⁻¹)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrivialCLift {
    bundle: TrivialBundle,
    c: CFamily,
    domain: BasePairDomain,
}

pub fn trivial_lift_from_c(bundle: TrivialBundle, c: CFamily, domain: BasePairDomain) -> Result<TrivialCLift> {
    c.validate(bundle.dim())?;
    Ok(TrivialCLift { bundle, c, domain })
}

impl HorizontalLift for TrivialCLift {
    type Bundle = TrivialBundle;

    fn bundle(&self) -> &TrivialBundle {
        &self.bundle
    }

    fn provenance(&self) -> Provenance {
        Provenance::CBuilt
    }

    fn in_domain(&self, q0: &TrivialPoint, r1: &Vec<f64>) -> bool {
        fits(&self.bundle, &q0.r) && fits(&self.bundle, r1) && self.domain.contains(&q0.r, r1)
    }

    fn compute(&self, q0: &TrivialPoint, r1: &Vec<f64>) -> Result<TrivialPoint> {
        let g = q0.g * self.c.value(&q0.r, r1).inverse();
        Ok(TrivialPoint::new(r1.clone(), g))
    }
}
