use std::f64::consts::PI;

use plurikp::special::{big_lambda, dilog, golden, golden_special_values, lambda_fn};
use proptest::prelude::*;
use quadrature::double_exponential::integrate;

/// `−∫₀^z log|1−x|/x dx` by double-exponential quadrature, split at the
/// logarithmic singularity `x = 1`.
fn lambda_quadrature(z: f64) -> f64 {
    let g = |x: f64| if x == 0.0 { 1.0 } else { -(1.0 - x).abs().ln() / x };
    if z <= 1.0 {
        integrate(g, 0.0, z, 1e-13).integral
    } else {
        integrate(g, 0.0, 1.0, 1e-13).integral + integrate(g, 1.0, z, 1e-13).integral
    }
}

#[test]
fn lambda_matches_quadrature_on_grid() {
    let mut worst = 0.0_f64;
    for k in -200..=200 {
        let z = k as f64 * 0.05;
        let dev = (lambda_fn(z).unwrap() - lambda_quadrature(z)).abs();
        worst = worst.max(dev);
    }
    assert!(worst <= 1e-9, "max deviation {worst:e}");
}

#[test]
fn dilog_matches_quadrature_below_one() {
    for k in 0..=110 {
        let z = -10.0 + k as f64 * 0.1;
        let dev = (dilog(z).unwrap() - lambda_quadrature(z)).abs();
        assert!(dev <= 1e-9, "z = {z}: {dev:e}");
    }
}

#[test]
fn golden_special_values_hold() {
    for sv in golden_special_values() {
        let dev = (dilog(sv.argument).unwrap() - sv.closed_form).abs();
        assert!(dev <= 1e-11, "{}: {dev:e}", sv.label);
    }
}

#[test]
fn golden_constant_is_the_negative_root() {
    let a: f64 = golden();
    assert!(a < 0.0);
    assert!((a * a - a - 1.0).abs() < 1e-15);
}

#[test]
fn golden_three_form_value() {
    let a: f64 = golden();
    let l = 0.5 * (big_lambda(a * a).unwrap() + big_lambda(-1.0 / a).unwrap() + big_lambda(1.0 / a).unwrap());
    assert!((l + PI * PI / 20.0).abs() < 1e-12);
}

#[test]
fn single_precision_tracks_double() {
    for k in -40..=40 {
        let z = k as f64 * 0.25;
        if z == 0.0 {
            continue;
        }
        let d = big_lambda(z).unwrap();
        let s = big_lambda(z as f32).unwrap() as f64;
        assert!((d - s).abs() <= 1e-5 * (1.0 + d.abs()), "z = {z}: {d} vs {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn lambda_is_odd_under_inversion(z in -50.0_f64..50.0) {
        prop_assume!(z != 0.0);
        let s = big_lambda(z).unwrap() + big_lambda(1.0 / z).unwrap();
        prop_assert!(s.abs() <= 1e-12, "z = {z}: {s:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lambda_matches_quadrature(z in -10.0_f64..10.0) {
        let dev = (lambda_fn(z).unwrap() - lambda_quadrature(z)).abs();
        prop_assert!(dev <= 1e-9, "z = {z}: {dev:e}");
    }

    #[test]
    fn lambda_derivative_is_the_integrand(z in -8.0_f64..8.0) {
        prop_assume!(z.abs() > 0.05 && (z - 1.0).abs() > 0.05);
        let h = 1e-5;
        let fd = (lambda_fn(z + h).unwrap() - lambda_fn(z - h).unwrap()) / (2.0 * h);
        let exact = -(1.0 - z).abs().ln() / z;
        prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
    }
}
