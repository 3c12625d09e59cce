mod common;

use proptest::prelude::*;
use rand::Rng;
use rayon::prelude::*;

use critlab::field::{Constant, FnField};
use critlab::limit_periodic::{
    almost_period_defect, b_antiderivative, b_deriv_eval, b_eval, mean_value, sigma_eval, zeta2_tail, DriftField,
};
use critlab::operator::{PresetRegistry, CE1_SA, CE2_SA};
use critlab::spectral::solve_ivp;

const R8: f64 = 6561.0;

#[test]
fn oddness_on_random_points() {
    let mut rng = common::rng(1);
    for _ in 0..100_000 {
        let x: f64 = rng.gen_range(-R8..R8);
        if x.fract() == 0.0 {
            continue;
        }
        assert_eq!(sigma_eval(-x).unwrap(), -sigma_eval(x).unwrap(), "sigma at {x}");
        assert!((b_eval(-x).unwrap() + b_eval(x).unwrap()).abs() <= 1e-12, "b at {x}");
    }
}

#[test]
fn drift_vanishes_on_integers() {
    for k in -729..=729 {
        assert!(b_eval(k as f64).unwrap().abs() < 1e-12, "b({k})");
    }
}

#[test]
fn antiderivative_against_oracle_quadrature() {
    let mut rng = common::rng(2);
    let b = |x: f64| b_eval(x).unwrap();
    let xs: Vec<f64> = (0..200).map(|_| rng.gen_range(-729.0..729.0)).collect();
    xs.par_iter().for_each(|&x| {
        let q = common::oracle_integral(&b, x, 1e-12);
        assert!((b_antiderivative(x).unwrap() - q).abs() <= 1e-8, "x = {x}");
    });
}

#[test]
fn derivative_matches_finite_difference() {
    let mut rng = common::rng(3);
    let h = 1e-5;
    for _ in 0..10_000 {
        let x: f64 = rng.gen_range(-R8..R8);
        // keep the stencil inside one cell, where σ is constant
        if (x - x.floor()) < 2.0 * h || (x.ceil() - x) < 2.0 * h {
            continue;
        }
        let fd = (b_eval(x + h).unwrap() - b_eval(x - h).unwrap()) / (2.0 * h);
        assert!((fd - b_deriv_eval(x).unwrap()).abs() <= 1e-5, "x = {x}");
    }
}

#[test]
fn near_periods() {
    for n in 3..=6 {
        let r = 3f64.powi(n);
        let p = 2.0 * r;
        let d = almost_period_defect(&DriftField, p, (-r, r), 0.01).unwrap();
        assert!(d <= 2.0 * zeta2_tail(n as u32) + 1e-9, "n = {n}: {d}");
    }
    let d = almost_period_defect(&DriftField, 162.0, (-2187.0, 2187.0), 0.01).unwrap();
    assert!(d <= 0.4427);
    assert_eq!(almost_period_defect(&DriftField, 0.0, (-5.0, 5.0), 0.01).unwrap(), 0.0);
}

#[test]
fn means_over_windows() {
    let m = mean_value(&DriftField, 0.0, 54.0).unwrap();
    assert!(m.abs() <= zeta2_tail(3));
    for k in 0..6 {
        let r = 3f64.powi(k);
        assert_eq!(mean_value(&DriftField, -r, 2.0 * r).unwrap(), 0.0);
    }
    assert_eq!(mean_value(&Constant(1.0), 0.0, 5.0).unwrap(), 1.0);
}

#[test]
fn exact_ground_state_residuals() {
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    for (name, sign) in [(CE1_SA, -1.0), (CE2_SA, 1.0)] {
        let op = reg.build(name).unwrap();
        let mut rng = common::rng(4);
        for _ in 0..10_000 {
            let x: f64 = rng.gen_range(-243.0..243.0);
            let (b, bp) = (b_eval(x).unwrap(), b_deriv_eval(x).unwrap());
            let phi = (sign * b_antiderivative(x).unwrap()).exp();
            let r = op.apply(x, phi, sign * b * phi, (sign * bp + b * b) * phi);
            assert!(r.abs() <= 1e-8, "{name} at {x}: {r}");
        }
    }
}

#[test]
fn gauge_round_trip_of_numerical_solution() {
    // u solves u'' − 2bu' = 0 numerically; v = e^{−B}u must solve v'' + (b' − b²)v = 0
    let reg = PresetRegistry::with_defaults(1e-9).unwrap();
    let drift = reg.build(critlab::operator::CE1_DRIFT).unwrap();
    let sa = reg.build(CE1_SA).unwrap();
    for end in [10.0, -10.0] {
        let u = solve_ivp(&drift, 0.0, 0.0, 1.0, 0.7, end, 1e-3).unwrap();
        let n = u.x.len();
        let mut worst: f64 = 0.0;
        for i in 1..n - 1 {
            let x = u.x[i];
            let (bx, bp) = (b_eval(x).unwrap(), b_deriv_eval(x).unwrap());
            let g = (-b_antiderivative(x).unwrap()).exp();
            let v = g * u.u[i];
            let dv = g * (u.du[i] - bx * u.u[i]);
            // u'' from the drift equation itself
            let d2u = 2.0 * bx * u.du[i];
            let d2v = g * (d2u - 2.0 * bx * u.du[i] + (bx * bx - bp) * u.u[i]);
            worst = worst.max(sa.apply(x, v, dv, d2v).abs());
        }
        assert!(worst <= 1e-6, "residual {worst}");
    }
}

proptest! {
    #[test]
    fn cell_increments_of_antiderivative(k in -20_000i64..20_000) {
        let x = k as f64;
        let inc = b_antiderivative(x + 1.0).unwrap() - b_antiderivative(x).unwrap();
        let s = sigma_eval(x + 0.5).unwrap();
        prop_assert!((inc - 0.375 * s).abs() <= 1e-9 * (1.0 + x.abs()));
    }

    #[test]
    fn antiderivative_is_even(x in -1e5f64..1e5) {
        prop_assert_eq!(b_antiderivative(x).unwrap(), b_antiderivative(-x).unwrap());
    }

    #[test]
    fn sigma_bounded_by_supremum(x in -1e9f64..1e9) {
        let sup = 1.0 + std::f64::consts::PI.powi(2) / 6.0;
        prop_assert!(sigma_eval(x).unwrap().abs() < sup);
    }

    #[test]
    fn recursion_rule(n in 0u32..12, t in 0.001f64..0.999, cell in 0u32..1000) {
        let p = 3f64.powi(n as i32);
        let cells = (2.0 * p) as u32;
        let x = p + (cell % cells) as f64 + t;
        prop_assume!(x <= 3.0 * p);
        let step = 1.0 / ((n + 1) as f64).powi(2);
        prop_assert!((sigma_eval(x).unwrap() - sigma_eval(x - 2.0 * p).unwrap() - step).abs() < 1e-12);
        prop_assert!((sigma_eval(-x).unwrap() - sigma_eval(-x + 2.0 * p).unwrap() + step).abs() < 1e-12);
    }

    #[test]
    fn mean_of_periodic_function(x0 in -50.0f64..50.0, periods in 1u32..6) {
        let f = FnField::new("cos^2", |x: f64| (std::f64::consts::PI * x).cos().powi(2));
        let m = mean_value(&f, x0, periods as f64).unwrap();
        prop_assert!((m - 0.5).abs() < 1e-9);
    }
}
