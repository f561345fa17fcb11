//! Sampled invariants of bundles, forms, lifts and the integrator.

use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use disconn_core::algebra::{CircleElement, LieGroup, Quaternion, UnitQuaternion};
use disconn_core::bundle::{HopfBundle, PrincipalBundle, S2Point, TrivialBundle};
use disconn_core::connection::{
    form_from_lift, lift_from_form, trivial_form_from_c, BasePairDomain, CFamily, ConnectionForm,
    HorizontalLift, LiftFromForm, SectionChoice,
};
use disconn_core::riemannian::{
    base_geodesic, continuous_connection_form, horizontal_lift_path, hopf_closed_form, lmw_form,
    riemannian_form, TangentVector,
};
use disconn_core::verify::{
    check_axioms, reevaluate, sample_pair, sample_rng, stream_id, uniform_angle, uniform_s2, Axiom,
    SampleConfig, SampleSpace,
};

const N: usize = 10_000;

fn rng(i: usize) -> rand_chacha::ChaCha8Rng {
    sample_rng(2024, stream_id(200, i))
}

#[test]
fn fiber_preservation_and_kappa() {
    let b = HopfBundle;
    for i in 0..N {
        let mut r = rng(i);
        let q = b.sample_total(&mut r);
        let g = uniform_angle(&mut r);
        let moved = b.act(&g, &q);
        assert!(b.project(&moved).distance(b.project(&q)) <= 1e-9);
        assert!(b.kappa(&q, &moved).unwrap().distance(&g) <= 1e-9);
    }
    let t = TrivialBundle::new(3);
    for i in 0..N {
        let mut r = rng(i);
        let q = t.sample_total(&mut r);
        let g = uniform_angle(&mut r);
        assert_eq!(t.project(&t.act(&g, &q)), t.project(&q));
        assert!(t.kappa(&q, &t.act(&g, &q)).unwrap().distance(&g) <= 1e-9);
    }
}

#[test]
fn sections_are_sections() {
    let b = HopfBundle;
    for i in 0..N {
        let r = uniform_s2(&mut rng(i));
        if let Ok(s) = b.local_section(&r) {
            assert!(b.project(&s).distance(r) <= 1e-9);
        }
        let s2 = HopfBundle::secondary_section(&r);
        if let Ok(s2) = s2 {
            assert!(b.project(&s2).distance(r) <= 1e-9);
        }
        assert!(b.project(&b.fiber_point(&r).unwrap()).distance(r) <= 1e-9);
    }
}

#[test]
fn vertical_directions_are_in_the_kernel() {
    for i in 0..N {
        let q = HopfBundle.sample_total(&mut rng(i)).quaternion();
        let v = HopfBundle::projection_differential(q, Quaternion::I * q);
        assert!(v.norm() <= 1e-9);
    }
}

#[test]
fn closed_form_equivariance_and_disjoint_translates() {
    let form = hopf_closed_form();
    let b = form.bundle();
    let lift = lift_from_form(form);
    for i in 0..N {
        let mut r = rng(i);
        let (q0, q1) = sample_pair(b, &mut r, &mut 0, |a, c| form.in_domain(a, c)).unwrap();
        let (g0, g1) = (uniform_angle(&mut r), uniform_angle(&mut r));
        let lhs = form.evaluate(&b.act(&g0, &q0), &b.act(&g1, &q1)).unwrap();
        let rhs = g1.compose(&form.evaluate(&q0, &q1).unwrap()).compose(&g0.inverse());
        assert!(lhs.distance(&rhs) <= 1e-9);

        // Translating the second slot of a horizontal pair by g ≠ e gives g.
        let h1 = lift.lift(&q0, &b.project(&q1)).unwrap();
        if g1.angle().abs() > 1e-6 {
            let a = form.evaluate(&q0, &b.act(&g1, &h1)).unwrap();
            assert!(a.distance(&g1) <= 1e-9);
            assert!(a.distance(&CircleElement::IDENTITY) > 1e-7);
        }
    }
}

#[test]
fn lift_is_independent_of_the_section() {
    let form = hopf_closed_form();
    let b = form.bundle();
    let canonical = LiftFromForm::new(form);
    let secondary =
        LiftFromForm::with_section(form, SectionChoice::custom(|_, r| HopfBundle::secondary_section(r)));
    for i in 0..N {
        let mut r = rng(i);
        let (q0, q1) = sample_pair(b, &mut r, &mut 0, |a, c| {
            let r1 = b.project(c);
            canonical.in_domain(a, &r1) && secondary.in_domain(a, &r1)
        })
        .unwrap();
        let r1 = b.project(&q1);
        let d = b.total_distance(&canonical.lift(&q0, &r1).unwrap(), &secondary.lift(&q0, &r1).unwrap());
        assert!(d <= 1e-9, "sample {i}: {d:e}");
    }
}

#[test]
fn constructions_are_mutually_inverse_on_trivial_bundles() {
    let t = TrivialBundle::new(2);
    let c = CFamily::Linear { alpha: -1.3, functional: vec![0.2, 0.9] };
    let form = trivial_form_from_c(t, c, BasePairDomain::Everywhere).unwrap();
    let back = form_from_lift(lift_from_form(&form));
    let lift = lift_from_form(&form);
    let again = lift_from_form(form_from_lift(lift_from_form(&form)));
    for i in 0..N {
        let mut r = rng(i);
        let (q0, q1) = (t.sample_total(&mut r), t.sample_total(&mut r));
        let a = form.evaluate(&q0, &q1).unwrap();
        assert!(a.distance(&back.evaluate(&q0, &q1).unwrap()) <= 1e-9);
        let l = lift.lift(&q0, &q1.r).unwrap();
        assert!(t.total_distance(&l, &again.lift(&q0, &q1.r).unwrap()) <= 1e-9);
        assert_eq!(t.project(&l), q1.r);
    }
}

#[test]
fn riemannian_form_is_equivariant() {
    let form = riemannian_form(256);
    let b = form.bundle();
    for i in 0..1000 {
        let mut r = rng(i);
        let (q0, q1) = sample_pair(b, &mut r, &mut 0, |a, c| form.in_domain(a, c)).unwrap();
        let (g0, g1) = (uniform_angle(&mut r), uniform_angle(&mut r));
        let lhs = form.evaluate(&b.act(&g0, &q0), &b.act(&g1, &q1)).unwrap();
        let rhs = g1.compose(&form.evaluate(&q0, &q1).unwrap()).compose(&g0.inverse());
        assert!(lhs.distance(&rhs) <= 1e-6, "sample {i}");
    }
}

#[test]
fn integrated_lifts_are_horizontal_and_track_the_base() {
    let b = HopfBundle;
    for i in 0..200 {
        let mut r = rng(i);
        let q0 = b.sample_total(&mut r);
        let r1 = uniform_s2(&mut r);
        let Ok(arc) = base_geodesic(&b.project(&q0), &r1) else { continue };
        let path = horizontal_lift_path(&arc, &q0, 64, true).unwrap();
        for s in path.trajectory.unwrap() {
            let v = TangentVector::new(s.point, s.velocity).unwrap();
            assert!(continuous_connection_form(&v).abs() <= 1e-6);
            let base = S2Point::new(arc.point(s.t)).unwrap();
            assert!(b.project(&s.point).distance(base) <= 1e-6);
        }
    }
}

#[test]
fn lmw_has_a_large_equivariance_witness() {
    let form = lmw_form(256);
    let r = check_axioms(&form, &[Axiom::Equivariance], &SampleConfig::new(11, 200));
    let eq = r.axiom(Axiom::Equivariance).unwrap();
    assert!(eq.max_violation > 0.05);
    let v = reevaluate(&form, Axiom::Equivariance, eq.worst_input.as_ref().unwrap()).unwrap();
    assert!((v - eq.max_violation).abs() <= 1e-12);
}

#[test]
fn reports_are_deterministic() {
    let cfg = SampleConfig::new(99, 500);
    let a = check_axioms(&hopf_closed_form(), &[], &cfg).to_json();
    let b = check_axioms(&hopf_closed_form(), &[], &cfg).to_json();
    assert_eq!(a, b);
    let other = check_axioms(&hopf_closed_form(), &[], &SampleConfig::new(100, 500)).to_json();
    assert_ne!(a, other);
}

#[test]
fn worst_inputs_reproduce_their_violations() {
    let form = riemannian_form(32);
    let r = check_axioms(&form, &[], &SampleConfig::new(5, 50));
    for rec in &r.axioms {
        if let Some(w) = &rec.worst_input {
            let v = reevaluate(&form, rec.id, w).unwrap();
            assert_abs_diff_eq!(v, rec.max_violation, epsilon = 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn lift_normalization_on_the_hopf_bundle(w in -1.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let q = Quaternion::new(w, x, y, z);
        prop_assume!(q.norm() > 0.1);
        let q0 = UnitQuaternion::normalize(q).unwrap();
        let lift = lift_from_form(hopf_closed_form());
        let r0 = HopfBundle.project(&q0);
        prop_assume!(lift.in_domain(&q0, &r0));
        prop_assert!(lift.lift(&q0, &r0).unwrap().distance(q0) <= 1e-9);
    }

    #[test]
    fn lift_equivariance_on_the_hopf_bundle(seed in 0u64..1_000_000, theta in -PI..PI) {
        let b = HopfBundle;
        let mut r = sample_rng(seed, 0);
        let q0 = b.sample_total(&mut r);
        let r1 = uniform_s2(&mut r);
        let g = CircleElement::from_angle(theta);
        let lift = lift_from_form(hopf_closed_form());
        prop_assume!(lift.in_domain(&q0, &r1) && lift.in_domain(&b.act(&g, &q0), &r1));
        let lhs = lift.lift(&b.act(&g, &q0), &r1).unwrap();
        let rhs = b.act(&g, &lift.lift(&q0, &r1).unwrap());
        prop_assert!(lhs.distance(rhs) <= 1e-9);
    }
}
