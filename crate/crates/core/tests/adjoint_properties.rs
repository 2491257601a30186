use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use tempered_core::adjoint::{adjoint_coefficients, adjoint_coefficients_exact, rankin_log_coefficient_exact};
use tempered_core::gaussian::GaussianRational;
use tempered_core::multiset::multiset_eq;
use tempered_core::primes::first_primes;
use tempered_core::{
    adjoint_class, adjoint_coefficient, certify_prime, classify, local_factor_adjoint, local_factor_rankin,
    local_zeta, CertifyParams, Classification, HeckeLocalDatum, NonTemperedShape, UnitaryClass3, Verdict,
    DEFAULT_TOL,
};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(first_primes(100))
}

fn shape() -> impl Strategy<Value = NonTemperedShape> {
    (1e-3..0.49f64, 0.0..TAU, 0.0..TAU).prop_map(|(t, a, b)| NonTemperedShape::from_args(t, a, b))
}

fn unit() -> impl Strategy<Value = Complex64> {
    (0.0..TAU).prop_map(|a| Complex64::from_polar(1.0, a))
}

fn consistent_class() -> impl Strategy<Value = UnitaryClass3> {
    prop_oneof![
        (prime(), unit(), unit(), unit()).prop_map(|(p, a, b, c)| UnitaryClass3::new(p, [a, b, c]).unwrap()),
        (prime(), shape()).prop_map(|(p, s)| UnitaryClass3::from_shape(p, &s).unwrap()),
    ]
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-400i64..=400, 1i64..=64).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// `(x_m² + 2·x_m·cos mθ)` with `x_m = p^{mt} + p^{−mt}`.
fn closed_form(p: u64, t: f64, theta: f64, m: usize) -> f64 {
    let x = (p as f64).powf(m as f64 * t) + (p as f64).powf(-(m as f64) * t);
    x * x + 2.0 * x * (m as f64 * theta).cos()
}

/// The nine products `α_i·conj(α_j)` with one unit-modulus diagonal term removed,
/// built without reference to the library.
fn naive_adjoint(c: &UnitaryClass3) -> Vec<Complex64> {
    let a = c.alphas();
    let mut all: Vec<Complex64> = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
    let one = (0..all.len())
        .min_by(|&i, &j| (all[i] - 1.0).norm().total_cmp(&(all[j] - 1.0).norm()))
        .unwrap();
    all.remove(one);
    all
}

fn params_with(depth: usize, margin: f64, oracle: bool, exact: bool) -> CertifyParams {
    CertifyParams { depth, margin, oracle, exact, ..CertifyParams::default() }
}

proptest! {
    #[test]
    fn adjoint_multiset_is_permutation_invariant(c in consistent_class(), k in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let base = adjoint_class(&c).unwrap();
        let other = adjoint_class(&c.permuted(perms[k])).unwrap();
        prop_assert!(multiset_eq(&base.eigenvalues, &other.eigenvalues, 1e-12));
        prop_assert!(multiset_eq(&base.eigenvalues, &naive_adjoint(&c), 1e-12));
    }

    #[test]
    fn coefficient_matches_closed_form(p in prime(), s in shape()) {
        let c = UnitaryClass3::from_shape(p, &s).unwrap();
        let d = HeckeLocalDatum::from_class(&c).unwrap();
        let Classification::NonTempered(found) = classify(&c, DEFAULT_TOL) else {
            return Err(TestCaseError::fail("expected non-tempered"));
        };
        for m in 1..=20 {
            let got = adjoint_coefficient(&d, m);
            let expected = closed_form(p, found.t, found.theta, m);
            prop_assert!((got - expected).abs() <= 1e-10 * expected.abs().max(1.0), "m={} {} vs {}", m, got, expected);
            let x = (p as f64).powf(m as f64 * s.t) + (p as f64).powf(-(m as f64) * s.t);
            prop_assert!(got > 0.0);
            prop_assert!(got >= x * (x - 2.0) * (1.0 - 1e-9));
        }
    }

    #[test]
    fn rankin_factorizes_through_zeta(c in consistent_class(), k in 0usize..3) {
        let s = Complex64::new([1.5, 2.0, 3.0][k], 0.0);
        let rankin = local_factor_rankin(&c, s).unwrap();
        let product = local_zeta(c.p(), s) * local_factor_adjoint(&c, s).unwrap();
        prop_assert!((rankin - product).norm() <= 1e-12 * rankin.norm());
    }

    #[test]
    fn exact_rankin_coefficients_are_nonnegative(a in small_rational(), b in small_rational(), m in 1usize..=8) {
        let trace = GaussianRational::new(a, b);
        let d = HeckeLocalDatum::exact(3, trace, GaussianRational::one()).unwrap();
        let q = rankin_log_coefficient_exact(&d, m).unwrap();
        prop_assert!(q >= BigRational::zero());
    }

    #[test]
    fn exact_and_float_coefficients_agree(a in small_rational(), p in prime()) {
        let d = HeckeLocalDatum::exact_real(p, a).unwrap();
        let exact = adjoint_coefficients_exact(&d, 6).unwrap();
        let float = adjoint_coefficients(&d.to_float(), 6);
        for (q, x) in exact.iter().zip(&float) {
            let q = tempered_core::gaussian::rational_to_f64(q);
            prop_assert!((q - x).abs() <= 1e-9 * q.abs().max(1.0));
        }
    }

    #[test]
    fn verdicts_are_exclusive_across_settings(c in consistent_class(), depth in 1usize..8, margin_exp in 0i32..12) {
        let d = HeckeLocalDatum::from_class(&c).unwrap();
        let margin = 10f64.powi(-margin_exp);
        let tempered = classify(&c, DEFAULT_TOL) == Classification::Tempered;
        let mut seen = Vec::new();
        for oracle in [false, true] {
            let cert = certify_prime(&d, &params_with(depth, margin, oracle, true)).unwrap();
            match cert.verdict {
                Verdict::RamanujanCertified => prop_assert!(tempered),
                Verdict::NonTemperedCertified => prop_assert!(!tempered),
                Verdict::Undetermined => prop_assert!(!(oracle && tempered)),
            }
            prop_assert_eq!(certify_prime(&d, &params_with(depth, margin, oracle, true)).unwrap(), cert.clone());
            seen.push(cert.verdict);
        }
        prop_assert!(!(seen.contains(&Verdict::RamanujanCertified) && seen.contains(&Verdict::NonTemperedCertified)));
    }

    #[test]
    fn exact_verdicts_are_exclusive(a in small_rational(), p in prime(), depth in 1usize..8) {
        let d = HeckeLocalDatum::exact_real(p, a.clone()).unwrap();
        // ω = 1 and real a: the class is {1, β, β⁻¹} with β + β⁻¹ = a − 1.
        let shifted = a - BigRational::from_integer(1.into());
        let tempered = &shifted * &shifted <= BigRational::from_integer(4.into());
        let cert = certify_prime(&d, &params_with(depth, 0.0, true, true)).unwrap();
        prop_assert!(cert.exact);
        match cert.verdict {
            Verdict::RamanujanCertified => prop_assert!(tempered),
            Verdict::NonTemperedCertified => prop_assert!(!tempered),
            Verdict::Undetermined => prop_assert!(false, "oracle left p={} undetermined", p),
        }
    }
}

#[test]
fn certificates_for_hand_built_data() {
    let params = CertifyParams::default();
    let half = BigRational::new(1.into(), 2.into());
    let d = HeckeLocalDatum::exact_real(2, half).unwrap();
    assert_eq!(certify_prime(&d, &params).unwrap().verdict, Verdict::RamanujanCertified);
    let d = HeckeLocalDatum::exact_real(2, BigRational::new(7.into(), 2.into())).unwrap();
    assert_eq!(certify_prime(&d, &params).unwrap().verdict, Verdict::NonTemperedCertified);
}
