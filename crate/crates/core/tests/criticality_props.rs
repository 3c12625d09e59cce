mod common;

use std::sync::Arc;

use proptest::prelude::*;

use critlab::criticality::{
    classify, ratio_divergence_check, second_solution_integrals, subsolution_certificate, wronskian_constancy,
    ClassifyOptions, SecondSolution,
};
use critlab::field::{fn_field, Constant, ExpSolution};
use critlab::limit_periodic::{b_antiderivative, DriftField};
use critlab::operator::{Operator1D, PresetRegistry, CE1_SA, CE2_SA};
use critlab::spectral::{solve_ivp, Grid};

#[test]
fn wronskian_is_constant_for_random_potentials() {
    let mut rng = common::rng(20);
    for case in 0..20 {
        let poly = common::TrigPoly::random(&mut rng, 5);
        let op = Operator1D::self_adjoint("trig", fn_field("c", move |x| poly.eval(x)));
        let u = solve_ivp(&op, 0.0, 0.0, 1.0, 0.0, 10.0, 1e-3).unwrap();
        let v = solve_ivp(&op, 0.0, 0.0, 0.0, 1.0, 10.0, 1e-3).unwrap();
        let p = wronskian_constancy(&op, &u, &v).unwrap();
        assert!((p.initial.abs() - 1.0).abs() < 1e-15);
        assert!(p.max_deviation <= 1e-6, "case {case}: {}", p.max_deviation);
    }
}

#[test]
fn second_solution_matches_rk4() {
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    let op = reg.build(CE1_SA).unwrap();
    let phi = reg.get(CE1_SA).unwrap().ground_state().unwrap();
    let psi = SecondSolution::new(&op, phi.as_ref(), 12).unwrap();
    assert!((psi.value(0.0) - 1.0).abs() < 1e-15);
    for end in [10.0, -10.0] {
        let rk = solve_ivp(&op, 0.0, 0.0, 1.0, psi.derivative(0.0), end, 1e-3).unwrap();
        let mut worst: f64 = 0.0;
        for (i, &x) in rk.x.iter().enumerate().step_by(50) {
            let p = psi.value(x);
            worst = worst.max((p - rk.u[i]).abs() / p.abs().max(1.0));
            let w = phi.value(x) * psi.derivative(x) - phi.derivative(x) * p;
            assert!((w - 1.0).abs() < 1e-6, "W({x}) = {w}");
        }
        assert!(worst <= 1e-6, "worst {worst}");
    }
}

#[test]
fn ratio_diverges_to_minus_infinity_on_ce1() {
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    let op = reg.build(CE1_SA).unwrap();
    let phi = reg.get(CE1_SA).unwrap().ground_state().unwrap();
    let psi = SecondSolution::new(&op, phi.as_ref(), 81).unwrap();
    let r = ratio_divergence_check(
        &|x| phi.value(x),
        &|x| phi.derivative(x),
        &|x| psi.value(x),
        &|x| psi.derivative(x),
        4,
        0.01,
    )
    .unwrap();
    assert!(r.monotone && r.unbounded, "{r:?}");
    // the decrements dominate ∫ e^{2B} over (−3ⁿ, −3ⁿ⁻¹), which is at least the window length
    for (n, d) in r.decrements.iter().enumerate() {
        assert!(*d >= 2.0 * 3f64.powi(n as i32) * 0.99, "n = {}: {d}", n + 1);
    }
}

#[test]
fn subsolution_certificates() {
    let grid = Grid::with_spacing(-729.0, 729.0, 0.01).unwrap();
    let ok = subsolution_certificate(&DriftField, 0.2, &grid).unwrap();
    assert!(ok.pass && ok.min_slack > 0.0, "{ok:?}");
    let bad = subsolution_certificate(&DriftField, 1e-9, &grid).unwrap();
    assert!(!bad.pass);
    assert!(bad.ln_psi_boundary.iter().any(|&l| l >= 0.0), "{bad:?}");
}

#[test]
fn scaling_phi_keeps_the_verdict() {
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    for name in [CE1_SA, CE2_SA] {
        let op = reg.build(name).unwrap();
        let sign = if name == CE1_SA { -1.0 } else { 1.0 };
        let opts = ClassifyOptions { radii: (0..=9).map(|k| 3f64.powi(k)).collect(), ..Default::default() };
        let one = classify(&op, &ExpSolution::new(Arc::new(DriftField), sign), &opts).unwrap();
        let seven = classify(&op, &ExpSolution::new(Arc::new(DriftField), sign).scaled(7.0), &opts).unwrap();
        assert_eq!(one.classification, seven.classification, "{name}");
    }
}

#[test]
fn unnormalised_integrals_scale_inversely_with_phi_squared() {
    let phi = ExpSolution::new(Arc::new(DriftField), -1.0);
    let seven = ExpSolution::new(Arc::new(DriftField), -1.0).scaled(7.0);
    let radii = [1.0, 9.0, 27.0];
    let a = second_solution_integrals(&Constant(1.0), &phi, &radii).unwrap();
    let b = second_solution_integrals(&Constant(1.0), &seven, &radii).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let (fx, fy) = (x.forward.unwrap(), y.forward.unwrap());
        assert!((fx / 49.0 - fy).abs() <= 1e-8 * fx);
    }
}

#[test]
fn ce1_integral_against_oracle() {
    let f = |x: f64| (2.0 * b_antiderivative(x).unwrap()).exp();
    let ours = second_solution_integrals(&Constant(1.0), &ExpSolution::new(Arc::new(DriftField), -1.0), &[27.0])
        .unwrap();
    let q = common::oracle_integral(&f, 27.0, 1e-6);
    let fwd = ours[0].forward.unwrap();
    assert!((fwd - q).abs() <= 1e-7 * q, "{fwd} vs {q}");
    let qb = common::oracle_integral(&f, -27.0, 1e-6).abs();
    assert!((ours[0].backward.unwrap() - qb).abs() <= 1e-7 * qb);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn integrals_are_nondecreasing(mut radii in prop::collection::vec(0.5f64..200.0, 2..6), sign in prop::bool::ANY) {
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let phi = ExpSolution::new(Arc::new(DriftField), if sign { 1.0 } else { -1.0 });
        let ints = second_solution_integrals(&Constant(1.0), &phi, &radii).unwrap();
        for w in ints.windows(2) {
            for (a, b) in [(w[0].forward, w[1].forward), (w[0].backward, w[1].backward)] {
                if let (Some(a), Some(b)) = (a, b) {
                    prop_assert!(b >= a);
                }
            }
        }
    }

    #[test]
    fn constant_potential_wronskian(c in -1.0f64..1.0) {
        let op = Operator1D::self_adjoint("const", Arc::new(Constant(c)));
        let u = solve_ivp(&op, 0.0, 0.0, 1.0, 0.0, 10.0, 2e-3).unwrap();
        let v = solve_ivp(&op, 0.0, 0.0, 0.0, 1.0, 10.0, 2e-3).unwrap();
        prop_assert!(wronskian_constancy(&op, &u, &v).unwrap().max_deviation <= 1e-6);
    }
}
