mod common;

use std::f64::consts::PI;

use common::{PI_3, PI_4, SIN_P_FRACTIONS, SIN_P_VALUES};
use proptest::prelude::*;
use radial_plap::ptrig::{pi_p, sin_p, PTrigTable};
use radial_plap::quadrature;

#[test]
fn half_period_anchors() {
    let p2 = pi_p(2.0).unwrap();
    assert!((p2 - PI).abs() <= 4.0 * f64::EPSILON * PI);
    assert!((pi_p(3.0).unwrap() - PI_3).abs() <= 1e-14 * PI_3);
    assert!((pi_p(4.0).unwrap() - PI_4).abs() <= 1e-14 * PI_4);
    // Conjugate exponents share the half-period.
    assert!((pi_p(1.5).unwrap() - PI_3).abs() <= 1e-14 * PI_3);
}

#[test]
fn half_period_rejects_p_at_most_one() {
    for p in [1.0, 0.5, -2.0, f64::NAN, f64::INFINITY] {
        assert!(pi_p(p).is_err(), "p = {p}");
    }
}

#[test]
fn sin_p_matches_high_precision_values() {
    for (p, values) in SIN_P_VALUES {
        let table = PTrigTable::new(p).unwrap();
        for (f, expected) in SIN_P_FRACTIONS.iter().zip(values) {
            let got = table.sin_p(f * table.pi_p());
            assert!(
                (got - expected).abs() <= 1e-12,
                "p = {p}, f = {f}: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn peak_is_the_amplitude() {
    for p in [1.2, 1.5, 2.0, 3.0, 4.0, 7.5] {
        let table = PTrigTable::new(p).unwrap();
        let peak = table.sin_p(0.5 * table.pi_p());
        let amplitude = (p - 1.0_f64).powf(1.0 / p);
        assert!((peak - amplitude).abs() <= 1e-14 * amplitude, "p = {p}");
        assert_eq!(table.amplitude(), amplitude);
    }
}

#[test]
fn reduces_to_circular_functions() {
    let table = PTrigTable::new(2.0).unwrap();
    for i in 0..=200 {
        let theta = -7.0 + 0.07 * i as f64;
        assert!((table.sin_p(theta) - theta.sin()).abs() < 1e-13);
        assert!((table.cos_p(theta) - theta.cos()).abs() < 1e-12);
    }
}

#[test]
fn free_function_uses_same_values() {
    let table = PTrigTable::cached(3.0).unwrap();
    assert_eq!(sin_p(3.0, 0.7).unwrap(), table.sin_p(0.7));
    assert!(sin_p(1.0, 0.7).is_err());
}

#[test]
fn monotone_on_quarter_period() {
    for p in [1.3, 2.0, 3.0, 5.0] {
        let table = PTrigTable::new(p).unwrap();
        let quarter = 0.5 * table.pi_p();
        let mut prev = table.sin_p(0.0);
        for i in 1..=1000 {
            let s = table.sin_p(quarter * i as f64 / 1000.0);
            assert!(s > prev, "p = {p}, step {i}");
            prev = s;
        }
    }
}

fn first_positive_zero(table: &PTrigTable) -> f64 {
    let (mut lo, mut hi) = (0.75 * table.pi_p(), 1.25 * table.pi_p());
    assert!(table.sin_p(lo) > 0.0 && table.sin_p(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if table.sin_p(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pythagorean_identity(p in 1.1f64..6.0, theta in -20.0f64..20.0) {
        let table = PTrigTable::cached(p).unwrap();
        let s = table.sin_p(theta);
        let c = table.cos_p(theta);
        let lhs = s.abs().powf(p) + (p - 1.0) * c.abs().powf(p);
        prop_assert!((lhs - (p - 1.0)).abs() <= 1e-11 * (p - 1.0).max(1.0));
    }

    #[test]
    fn odd_and_periodic(p in 1.1f64..6.0, theta in -20.0f64..20.0) {
        let table = PTrigTable::cached(p).unwrap();
        let s = table.sin_p(theta);
        prop_assert!((table.sin_p(-theta) + s).abs() <= 1e-13);
        prop_assert!((table.sin_p(theta + 2.0 * table.pi_p()) - s).abs() <= 1e-12);
        prop_assert!((table.sin_p(theta + table.pi_p()) + s).abs() <= 1e-12);
    }

    #[test]
    fn zero_found_by_bisection_is_the_half_period(p in 1.1f64..6.0) {
        let table = PTrigTable::new(p).unwrap();
        let zero = first_positive_zero(&table);
        prop_assert!((zero - table.pi_p()).abs() <= 1e-12 * table.pi_p());
    }

    #[test]
    fn cosine_is_the_derivative(p in 1.2f64..5.0, frac in 0.02f64..0.98) {
        let table = PTrigTable::cached(p).unwrap();
        // Stay away from the zeros of cos_p, where sin_p is only C^1 for p > 2.
        let theta = frac * 0.45 * table.pi_p();
        let h = 1e-5;
        let fd = (table.sin_p(theta + h) - table.sin_p(theta - h)) / (2.0 * h);
        prop_assert!((fd - table.cos_p(theta)).abs() <= 1e-6);
    }

    #[test]
    fn angle_rate_is_positive(p in 1.1f64..6.0, theta in -20.0f64..20.0,
                              lambda in 1e-3f64..1e4, q in 1e-3f64..1e3) {
        let table = PTrigTable::cached(p).unwrap();
        prop_assert!(table.prufer_rhs(theta, lambda, q).unwrap() > 0.0);
    }
}

#[test]
fn angle_rate_at_zeros_of_sin_p() {
    // At theta = j pi_p the rate is lambda^{1/p} regardless of q.
    let table = PTrigTable::new(3.0).unwrap();
    for j in 0..4 {
        let rate = table.prufer_rhs(j as f64 * table.pi_p(), 8.0, 5.0).unwrap();
        assert!((rate - 2.0).abs() < 1e-12);
    }
    assert!(table.prufer_rhs(0.0, 0.0, 1.0).is_err());
    assert!(table.prufer_rhs(0.0, 1.0, -1.0).is_err());
}

#[test]
fn scaled_sine_solves_the_constant_weight_equation() {
    // v = sin_p(w t) with w = k pi_p must satisfy the first-order form
    // phi(v'(t)) - phi(v'(0)) + w^p int_0^t phi(v) = 0, phi(x) = |x|^{p-2} x.
    for p in [1.5, 2.0, 3.0] {
        let table = PTrigTable::new(p).unwrap();
        let phi = |x: f64| x.abs().powf(p - 1.0).copysign(x);
        for k in 1..=2 {
            let w = k as f64 * table.pi_p();
            let lambda = w.powf(p);
            let flux = |t: f64| phi(w * table.cos_p(w * t));
            let start = flux(0.0);
            let n = 1000;
            let mut integral = 0.0;
            for i in 0..n {
                let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
                integral += quadrature::integrate(|t| phi(table.sin_p(w * t)), a, b, 1e-14)
                    .unwrap()
                    .value;
                let residual = (flux(b) - start + lambda * integral) / start;
                assert!(
                    residual.abs() <= 1e-8,
                    "p = {p}, k = {k}, t = {b}: {residual:e}"
                );
            }
        }
    }
}
