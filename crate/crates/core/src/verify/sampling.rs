//! Seeded sampling of bundle points.
//!
//! Every sample `i` of axiom `a` draws from its own ChaCha8 stream
//! `(seed, stream = a·2⁴⁰ + i)`, so results do not depend on evaluation
//! order or thread count.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{CircleElement, Quaternion, UnitQuaternion};
use crate::bundle::{HopfBundle, PrincipalBundle, S2Point, TrivialBundle, TrivialPoint};

/// Half-width of the box `[-w, w]ⁿ` trivial-bundle base points come from.
pub const TRIVIAL_BOX_HALF_WIDTH: f64 = 2.0;
/// Attempts per sample before it is recorded as skipped.
pub const MAX_ATTEMPTS: usize = 100;

/// Spread of the perturbation used for near-diagonal partners.
const NEAR_SCALE: f64 = 0.3;
/// Fraction of pair draws aimed at the domain boundary.
const BOUNDARY_FRACTION: f64 = 1.0 / 32.0;
/// Fraction of pair draws taken near the diagonal.
const NEAR_FRACTION: f64 = 0.25;

pub fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn stream_id(axiom: usize, sample: usize) -> u64 {
    ((axiom as u64) << 40) | sample as u64
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

pub fn uniform_angle(rng: &mut ChaCha8Rng) -> CircleElement {
    CircleElement::from_angle(rng.random_range(-PI..PI))
}

/// Bundles the verifier knows how to sample.
pub trait SampleSpace: PrincipalBundle {
    fn sample_total(&self, rng: &mut ChaCha8Rng) -> Self::Total;
    fn sample_group(&self, rng: &mut ChaCha8Rng) -> Self::Group;
    /// A point close to `q`, not necessarily on its fiber.
    fn near_partner(&self, q: &Self::Total, rng: &mut ChaCha8Rng) -> Self::Total;
    /// A point `q'` with `(q, q')` on the boundary of the natural pair
    /// domain, when the bundle has one.
    fn boundary_partner(&self, q: &Self::Total, rng: &mut ChaCha8Rng) -> Option<Self::Total>;
}

fn uniform_s3(rng: &mut ChaCha8Rng) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        if q.norm() > 1e-6 {
            return UnitQuaternion::normalize(q).expect("non-zero");
        }
    }
}

impl SampleSpace for HopfBundle {
    fn sample_total(&self, rng: &mut ChaCha8Rng) -> UnitQuaternion {
        uniform_s3(rng)
    }

    fn sample_group(&self, rng: &mut ChaCha8Rng) -> CircleElement {
        uniform_angle(rng)
    }

    fn near_partner(&self, q: &UnitQuaternion, rng: &mut ChaCha8Rng) -> UnitQuaternion {
        loop {
            let d = Quaternion::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
            if let Ok(p) = UnitQuaternion::normalize(q.quaternion() + d.scale(NEAR_SCALE)) {
                return p;
            }
        }
    }

    /// `g·j·q`, which lies over `-φ(q)`.
    fn boundary_partner(&self, q: &UnitQuaternion, rng: &mut ChaCha8Rng) -> Option<UnitQuaternion> {
        let g = uniform_angle(rng);
        Some(self.act(&g, &(UnitQuaternion::J * *q)))
    }
}

impl SampleSpace for TrivialBundle {
    fn sample_total(&self, rng: &mut ChaCha8Rng) -> TrivialPoint {
        let w = TRIVIAL_BOX_HALF_WIDTH;
        let r = (0..self.dim()).map(|_| rng.random_range(-w..w)).collect();
        TrivialPoint::new(r, uniform_angle(rng))
    }

    fn sample_group(&self, rng: &mut ChaCha8Rng) -> CircleElement {
        uniform_angle(rng)
    }

    fn near_partner(&self, q: &TrivialPoint, rng: &mut ChaCha8Rng) -> TrivialPoint {
        let r = q.r.iter().map(|x| x + NEAR_SCALE * gaussian(rng)).collect();
        TrivialPoint::new(r, uniform_angle(rng))
    }

    fn boundary_partner(&self, _q: &TrivialPoint, _rng: &mut ChaCha8Rng) -> Option<TrivialPoint> {
        None
    }
}

/// Draws pairs until `accept` holds, counting rejected draws into
/// `resampled`. Returns `None` after [`MAX_ATTEMPTS`] rejections.
pub fn sample_pair<B: SampleSpace>(
    bundle: &B,
    rng: &mut ChaCha8Rng,
    resampled: &mut usize,
    accept: impl Fn(&B::Total, &B::Total) -> bool,
) -> Option<(B::Total, B::Total)> {
    for _ in 0..MAX_ATTEMPTS {
        let q0 = bundle.sample_total(rng);
        let u: f64 = rng.random();
        let q1 = if u < BOUNDARY_FRACTION {
            bundle.boundary_partner(&q0, rng).unwrap_or_else(|| bundle.sample_total(rng))
        } else if u < BOUNDARY_FRACTION + NEAR_FRACTION {
            bundle.near_partner(&q0, rng)
        } else {
            bundle.sample_total(rng)
        };
        if accept(&q0, &q1) {
            return Some((q0, q1));
        }
        *resampled += 1;
    }
    None
}

/// Uniform point of S².
pub fn uniform_s2(rng: &mut ChaCha8Rng) -> S2Point {
    loop {
        let (x, y, z) = (gaussian(rng), gaussian(rng), gaussian(rng));
        if let Ok(p) = S2Point::from_xyz(x, y, z) {
            return p;
        }
    }
}
