//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr,
//! bypassing the test harness's output capture.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};
use std::io::Write;
use std::time::Instant;

use disconn_core::algebra::{CircleElement, LieGroup, Quaternion, UnitQuaternion};
use disconn_core::bundle::{HopfBundle, PrincipalBundle, S2Point, TrivialBundle};
use disconn_core::connection::{
    alpha_inverse, alpha_map, decompose_pair, form_from_lift, lift_from_form, slice_probe,
    tangent_split_check, trivial_form_from_c, BasePairDomain, CFamily, ConnectionForm,
};
use disconn_core::riemannian::{
    beta_theta, hopf_closed_form, lift_convergence, lmw_form, riemannian_form, DEFAULT_STEPS,
};
use disconn_core::verify::{
    check_axioms, compare_forms, counterexample_sweep, sample_pair, sample_rng, stream_id, Axiom,
    SampleConfig, SampleSpace, Verdict,
};

/// Independently computed value of the counterexample angle at θ = π/8.
const BETA_PI_8: f64 = 0.306_971_562_784_468_5;

fn report(name: &str, pass: bool, detail: &str) {
    let line = format!("{} {name}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{name}: {detail}");
}

fn trivial_forms() -> Vec<(&'static str, disconn_core::connection::TrivialCForm)> {
    let b = TrivialBundle::new(2);
    vec![
        ("identity", trivial_form_from_c(b, CFamily::Identity, BasePairDomain::Everywhere).unwrap()),
        (
            "linear",
            trivial_form_from_c(
                b,
                CFamily::Linear { alpha: 0.7, functional: vec![1.0, -0.5] },
                BasePairDomain::Everywhere,
            )
            .unwrap(),
        ),
    ]
}

#[test]
fn closed_form_agrees_with_geodesic_construction() {
    let start = Instant::now();
    let r = compare_forms(&hopf_closed_form(), &riemannian_form(DEFAULT_STEPS), &SampleConfig::new(42, 1000))
        .unwrap();
    let secs = start.elapsed().as_secs_f64();
    report(
        "closed form vs geodesic construction",
        r.samples == 1000 && r.max_deviation <= 1e-6 && secs <= 60.0,
        &format!("{} pairs, max deviation {:.3e} (tol 1e-6), {secs:.2} s (limit 60 s)", r.samples, r.max_deviation),
    );
}

#[test]
fn axiom_suite_passes_on_exact_forms() {
    let cfg = SampleConfig::new(42, 10_000);
    let mut lines = Vec::new();
    let mut pass = true;
    let mut check = |label: &str, report: disconn_core::verify::VerificationReport| {
        let worst = report.axioms.iter().map(|a| a.max_violation).fold(0.0, f64::max);
        pass &= report.verdict == Verdict::Pass && worst <= 1e-9;
        lines.push(format!("{label} max {worst:.2e}"));
    };
    check("hopf closed", check_axioms(&hopf_closed_form(), &[], &cfg));
    for (name, f) in trivial_forms() {
        check(name, check_axioms(&f, &[], &cfg));
    }
    report("axiom suite at 1e4 samples", pass, &format!("{} (tol 1e-9)", lines.join(", ")));
}

#[test]
fn counterexample_is_reproduced() {
    let table = counterexample_sweep(&[0.0, FRAC_PI_8], DEFAULT_STEPS).unwrap();
    let row = table.rows[1];
    let beta = beta_theta(FRAC_PI_8).unwrap();
    let angle_ok = (row.lmw_angle - beta).abs() <= 1e-4 && (row.lmw_angle - BETA_PI_8).abs() <= 1e-4;
    let deriv_ok = (table.derivative_at_zero - FRAC_PI_4).abs() <= 1e-3;
    let zero_ok = table.rows[0].lmw_angle.abs() <= 1e-12;

    let r = check_axioms(&lmw_form(DEFAULT_STEPS), &[], &SampleConfig::new(42, 1000));
    let eq = r.axiom(Axiom::Equivariance).unwrap();
    let verdict_ok = r.verdict == Verdict::Fail && eq.max_violation > 0.05;
    report(
        "counterexample reproduction",
        angle_ok && deriv_ok && zero_ok && verdict_ok,
        &format!(
            "angle at pi/8 {:.8} vs beta {:.8} (tol 1e-4); derivative at 0 {:.6} vs pi/4 (tol 1e-3); \
             verdict {:?}, max equivariance violation {:.3} (> 0.05)",
            row.lmw_angle, beta, table.derivative_at_zero, r.verdict, eq.max_violation
        ),
    );
}

/// Max reconstruction and horizontality errors of `decompose_pair` over
/// `n` in-domain pairs.
fn decomposition_errors<F>(form: &F, n: usize, seed: u64) -> (f64, f64)
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let b = form.bundle();
    let e = <<F::Bundle as PrincipalBundle>::Group as LieGroup>::identity();
    let (mut recon, mut horiz) = (0.0_f64, 0.0_f64);
    for i in 0..n {
        let mut rng = sample_rng(seed, stream_id(100, i));
        let (q0, q1) = sample_pair(b, &mut rng, &mut 0, |a, c| form.in_domain(a, c)).unwrap();
        let d = decompose_pair(form, &q0, &q1).unwrap();
        recon = recon.max(b.total_distance(&b.act(&d.g, &d.h1), &q1));
        horiz = horiz.max(form.evaluate(&q0, &d.h1).unwrap().distance(&e));
    }
    (recon, horiz)
}

#[test]
fn pair_decomposition_is_unique_and_horizontal() {
    let mut pass = true;
    let mut lines = Vec::new();
    let mut record = |label: &str, (recon, horiz): (f64, f64), tol: f64| {
        pass &= recon <= tol && horiz <= tol;
        lines.push(format!("{label} {recon:.1e}/{horiz:.1e} (tol {tol:.0e})"));
    };
    record("hopf closed", decomposition_errors(&hopf_closed_form(), 10_000, 1), 1e-9);
    for (name, f) in trivial_forms() {
        record(name, decomposition_errors(&f, 10_000, 2), 1e-9);
    }
    record("geodesic", decomposition_errors(&riemannian_form(DEFAULT_STEPS), 10_000, 3), 1e-6);
    report(
        "pair decomposition on 1e4 pairs (reconstruction/horizontality)",
        pass,
        &lines.join(", "),
    );
}

#[test]
fn slice_and_transversality_probes() {
    let form = hopf_closed_form();
    let b = HopfBundle;
    let mut min_sep = f64::INFINITY;
    let mut ranks_ok = true;
    for i in 0..100 {
        let mut rng = sample_rng(7, stream_id(101, i));
        let q = b.sample_total(&mut rng);
        let probe = slice_probe(&form, &q, 64, i as u64).unwrap();
        min_sep = min_sep.min(probe.min_separation.unwrap_or(0.0));
        ranks_ok &= tangent_split_check(&form, &q).unwrap().rank == 3;
    }
    let mut trivial_ok = true;
    for n in 1..=3 {
        let tb = TrivialBundle::new(n);
        let f = trivial_form_from_c(
            tb,
            CFamily::Linear { alpha: 0.4, functional: vec![1.0; n] },
            BasePairDomain::Everywhere,
        )
        .unwrap();
        for i in 0..10 {
            let q = tb.sample_total(&mut sample_rng(8, stream_id(102, i)));
            trivial_ok &= tangent_split_check(&f, &q).unwrap().rank == n + 1;
            trivial_ok &= slice_probe(&f, &q, 32, i as u64).unwrap().separated;
        }
    }
    report(
        "slice and transversality probes",
        min_sep > 1e-2 && ranks_ok && trivial_ok,
        &format!(
            "hopf: min separation {min_sep:.3e} (> 1e-2), rank 3 at all 100 points: {ranks_ok}; \
             trivial n=1..3 rank n+1: {trivial_ok}"
        ),
    );
}

/// Max error of `alpha_map ∘ alpha_inverse` and of the orbit check over
/// `n` pairs.
fn reduced_round_trip<F>(form: &F, n: usize, seed: u64) -> f64
where
    F: ConnectionForm,
    F::Bundle: SampleSpace,
{
    let b = form.bundle();
    let mut worst = 0.0_f64;
    for i in 0..n {
        let mut rng = sample_rng(seed, stream_id(103, i));
        let (q0, q1) = sample_pair(b, &mut rng, &mut 0, |a, c| {
            form.in_domain(a, c) && b.local_section(&b.project(a)).is_ok()
        })
        .unwrap();
        let rp = alpha_map(form, &q0, &q1).unwrap();
        let (p0, p1) = alpha_inverse(form, &rp).unwrap();
        let back = alpha_map(form, &p0, &p1).unwrap();
        // Same orbit: (p0, p1) = k·(q0, q1).
        let k = b.kappa(&q0, &p0).unwrap();
        worst = worst
            .max(b.total_distance(&b.act(&k, &q1), &p1))
            .max(b.total_distance(&back.point, &rp.point))
            .max(back.group.distance(&rp.group))
            .max(b.base_distance(&back.r1, &rp.r1));
    }
    worst
}

#[test]
fn reduced_space_identification_round_trips() {
    let hopf = reduced_round_trip(&hopf_closed_form(), 1000, 4);
    let trivial = trivial_forms().iter().map(|(_, f)| reduced_round_trip(f, 1000, 5)).fold(0.0, f64::max);
    report(
        "reduced-space round trip on 1e3 pairs",
        hopf <= 1e-9 && trivial <= 1e-9,
        &format!("hopf {hopf:.2e}, trivial {trivial:.2e} (tol 1e-9)"),
    );
}

#[test]
fn rk4_lift_converges_at_third_order_or_better() {
    let steps = [32, 64, 128, 256];
    let cases = [
        (UnitQuaternion::ONE, S2Point::K),
        (
            UnitQuaternion::normalize(Quaternion::new(0.3, 0.5, -0.2, 0.8)).unwrap(),
            S2Point::from_xyz(-0.7, 0.1, -0.6).unwrap(),
        ),
    ];
    let mut pass = true;
    let mut lines = Vec::new();
    for (q0, r1) in cases {
        let rows = lift_convergence(&q0, &r1, &steps).unwrap();
        let ratios: Vec<f64> = rows.windows(2).map(|w| w[0].endpoint_error / w[1].endpoint_error).collect();
        pass &= ratios.iter().all(|&r| r >= 8.0);
        lines.push(format!(
            "errors [{}] ratios [{}]",
            rows.iter().map(|r| format!("{:.2e}", r.endpoint_error)).collect::<Vec<_>>().join(", "),
            ratios.iter().map(|r| format!("{r:.1}")).collect::<Vec<_>>().join(", ")
        ));
    }
    report("RK4 convergence (factor >= 8 per halving)", pass, &lines.join("; "));
}

#[test]
fn hopf_domain_is_proper() {
    let (one, j) = (UnitQuaternion::ONE, UnitQuaternion::J);
    let closed = hopf_closed_form();
    let geodesic = riemannian_form(DEFAULT_STEPS);
    let induced = form_from_lift(lift_from_form(hopf_closed_form()));
    let rejected = !closed.in_domain(&one, &j) && !geodesic.in_domain(&one, &j) && !induced.in_domain(&one, &j);
    let r = check_axioms(&closed, &[], &SampleConfig::new(42, 1000));
    // The rejection persists along the whole fiber of ĵ.
    let fiber_rejected = (0..16).all(|k| {
        let g = CircleElement::from_angle(k as f64 * 0.4 - 3.0);
        !closed.in_domain(&one, &HopfBundle.act(&g, &j))
    });
    report(
        "hopf domain properness",
        rejected && fiber_rejected && r.resampled_draws >= 1,
        &format!(
            "(1, j) rejected by closed/geodesic/induced forms: {rejected}; resampled draws in report {}",
            r.resampled_draws
        ),
    );
}
