use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tempered_core::archimedean::{gamma, standard_gamma_factor};
use tempered_core::multiset::multiset_eq;
use tempered_core::sample::random_arch_params;
use tempered_core::{adjoint_gamma_factor, arch_adjoint_set, gamma_r, pole_order_at_zero, ArchParams, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params() -> impl Strategy<Value = ArchParams> {
    any::<u64>().prop_map(|seed| random_arch_params(&mut ChaCha8Rng::seed_from_u64(seed)))
}

/// Away from the poles, for points with a comfortable margin.
fn regular_point() -> impl Strategy<Value = Complex64> {
    (-20.0..20.0f64, -20.0..20.0f64)
        .prop_filter("near a pole", |(re, im)| im.abs() > 0.1 || *re > 0.1 || (re / 2.0 - (re / 2.0).round()).abs() > 0.05)
        .prop_map(|(re, im)| c(re, im))
}

proptest! {
    #[test]
    fn pole_order_at_zero_is_positive(p in params()) {
        prop_assert!(pole_order_at_zero(&p) >= 1);
        let set = arch_adjoint_set(&p);
        prop_assert!(set.b.iter().any(|b| b.norm() < 1e-9));
    }

    #[test]
    fn adjoint_set_is_conjugation_closed(p in params()) {
        let b = arch_adjoint_set(&p).b;
        let conj: Vec<Complex64> = b.iter().map(|z| z.conj()).collect();
        prop_assert!(multiset_eq(&b, &conj, 1e-12));
    }

    #[test]
    fn adjoint_factor_is_real_on_the_real_axis(p in params(), s in 0.5..6.0f64) {
        let v = adjoint_gamma_factor(&p, c(s, 0.0)).unwrap();
        prop_assert!(v.im.abs() <= 1e-10 * v.norm().max(f64::MIN_POSITIVE), "{}", v);
    }

    #[test]
    fn gamma_r_shift_identity(s in regular_point()) {
        let lhs = gamma_r(s + 2.0).unwrap();
        let rhs = s / (2.0 * PI) * gamma_r(s).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(f64::MIN_POSITIVE));
    }

    #[test]
    fn gamma_recurrence_and_reflection(z in regular_point()) {
        let g = gamma(z);
        let rel = |a: Complex64, b: Complex64| (a - b).norm() / b.norm().max(f64::MIN_POSITIVE);
        prop_assert!(rel(gamma(z + 1.0), z * g) < 1e-12);
        let reflected = g * gamma(Complex64::new(1.0, 0.0) - z);
        let expected = Complex64::new(PI, 0.0) / (z * PI).sin();
        prop_assert!(rel(reflected, expected) < 1e-11);
    }
}

#[test]
fn gamma_matches_factorials_and_half_integers() {
    let mut factorial = 1.0f64;
    for n in 1..=20 {
        let g = gamma(c(n as f64, 0.0));
        assert!((g.re - factorial).abs() <= 1e-13 * factorial, "Γ({n})");
        factorial *= n as f64;
    }
    let mut half = PI.sqrt();
    for n in 0..15 {
        let x = n as f64 + 0.5;
        assert!((gamma(c(x, 0.0)).re - half).abs() <= 1e-13 * half, "Γ({x})");
        half *= x;
    }
}

#[test]
fn pole_examples() {
    let i = c(0.0, 1.0);
    let zero = c(0.0, 0.0);
    let rotated = ArchParams::spherical([i, zero, -i]).unwrap();
    assert_eq!(pole_order_at_zero(&rotated), 2);
    assert_eq!(adjoint_gamma_factor(&rotated, zero), Err(Error::Pole { order: 2 }));
    let trivial = ArchParams::spherical([zero; 3]).unwrap();
    assert_eq!(pole_order_at_zero(&trivial), 8);
    assert!((adjoint_gamma_factor(&trivial, c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-12);
    let shifted = ArchParams::from_shape(0.0, 0.0, 1.0 / 3.0).unwrap();
    assert_eq!(pole_order_at_zero(&shifted), 2);
    assert_eq!(gamma_r(c(-4.0, 0.0)), Err(Error::Pole { order: 1 }));
}

#[test]
fn standard_factor_at_trivial_parameters() {
    let trivial = ArchParams::spherical([c(0.0, 0.0); 3]).unwrap();
    let v = standard_gamma_factor(&trivial, c(1.0, 0.0)).unwrap();
    assert!((v - 1.0).norm() < 1e-12);
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(ArchParams::spherical([c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
    assert!(ArchParams::new([c(0.0, 0.0); 3], [0, 2, 1]).is_err());
}
