use std::collections::BTreeSet;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempered_core::primes::primes_up_to;
use tempered_core::sample::{random_nontempered_class, random_tempered_class};
use tempered_core::series::build_from_corpus;
use tempered_core::{
    build_adjoint_log_series, evaluate_incomplete, local_factor_adjoint, positive_type_scan, witness_report,
    Error, GL3Corpus, HeckeLocalDatum, LogDirichletSeries, UnitaryClass3, Window,
};

const MAX_PRIME: u64 = 60;

/// One class per prime up to `MAX_PRIME`; `nontempered_share` of them non-tempered.
fn random_corpus(seed: u64, nontempered_share: f64) -> Vec<UnitaryClass3> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    primes_up_to(MAX_PRIME)
        .into_iter()
        .map(|p| {
            if rng.gen_bool(nontempered_share) {
                random_nontempered_class(&mut rng, p).0
            } else {
                random_tempered_class(&mut rng, p)
            }
        })
        .collect()
}

fn data_of(classes: &[UnitaryClass3]) -> Vec<HeckeLocalDatum> {
    classes.iter().map(|c| HeckeLocalDatum::from_class(c).unwrap()).collect()
}

fn excluded_subset(bits: u32) -> BTreeSet<u64> {
    primes_up_to(MAX_PRIME).into_iter().enumerate().filter(|(i, _)| bits >> (i % 32) & 1 == 1).map(|(_, p)| p).collect()
}

proptest! {
    #[test]
    fn negative_count_ignores_insertion_order(seed in any::<u64>(), share in 0.0..1.0f64, shuffle in any::<u64>()) {
        let data = data_of(&random_corpus(seed, share));
        let window = Window::new(MAX_PRIME, 6);
        let series = build_adjoint_log_series(&data, &BTreeSet::new(), window, false).unwrap();
        let mut entries: Vec<_> = series.iter().map(|(p, m, c)| (p, m, c.clone())).collect();
        entries.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let rebuilt = LogDirichletSeries::from_entries(entries, series.excluded().clone(), window, series.growth().clone());
        let a = positive_type_scan(&series, 1e-9);
        let b = positive_type_scan(&rebuilt, 1e-9);
        prop_assert_eq!(a.negative_count, b.negative_count);
        prop_assert_eq!(a.first_negative, b.first_negative);
        prop_assert_eq!(a.scanned, b.scanned);
    }

    #[test]
    fn enlarging_s_adds_no_new_first_negative(seed in any::<u64>(), share in 0.0..1.0f64, small in any::<u32>(), extra in any::<u32>()) {
        let data = data_of(&random_corpus(seed, share));
        let window = Window::new(MAX_PRIME, 4);
        let s_small = excluded_subset(small);
        let s_large: BTreeSet<u64> = s_small.union(&excluded_subset(extra)).copied().collect();
        let before = positive_type_scan(&build_adjoint_log_series(&data, &s_small, window, false).unwrap(), 1e-9);
        let after = positive_type_scan(&build_adjoint_log_series(&data, &s_large, window, false).unwrap(), 1e-9);
        if let Some(first) = after.first_negative {
            prop_assert!(!s_large.contains(&first.p));
            let earlier = before.first_negative.unwrap();
            prop_assert!((earlier.p, earlier.m) <= (first.p, first.m));
        }
        prop_assert!(after.negative_count <= before.negative_count);
    }

    #[test]
    fn evaluation_matches_the_euler_product(seed in any::<u64>(), share in 0.0..1.0f64) {
        let classes = random_corpus(seed, share);
        let data = data_of(&classes);
        let series = build_adjoint_log_series(&data, &BTreeSet::new(), Window::new(MAX_PRIME, 12), false).unwrap();
        let eval = evaluate_incomplete(&series, 3.0).unwrap();
        let product: Complex64 = classes
            .iter()
            .map(|c| local_factor_adjoint(c, Complex64::new(3.0, 0.0)).unwrap())
            .product();
        prop_assert!(product.im.abs() < 1e-12 * product.norm());
        let gap = (eval.value - product.re).abs();
        prop_assert!(gap <= 1e-10 + eval.tail_bound * eval.value.max(product.re), "gap {} tail {}", gap, eval.tail_bound);
    }

    #[test]
    fn nontempered_corpora_are_positive_type(seed in any::<u64>(), max_power in 1usize..10) {
        let data = data_of(&random_corpus(seed, 1.0));
        let series = build_adjoint_log_series(&data, &BTreeSet::new(), Window::new(MAX_PRIME, max_power), false).unwrap();
        let report = positive_type_scan(&series, 0.0);
        prop_assert!(report.is_positive_type);
        prop_assert_eq!(report.negative_count, 0);
        let witnesses = witness_report(&series, 0.0);
        prop_assert_eq!(witnesses.witness_count, 0);
        prop_assert!(evaluate_incomplete(&series, 3.0).unwrap().value > 1.0);
    }

    #[test]
    fn witness_density_is_a_fraction(seed in any::<u64>(), share in 0.0..1.0f64) {
        let data = data_of(&random_corpus(seed, share));
        let series = build_adjoint_log_series(&data, &BTreeSet::new(), Window::new(MAX_PRIME, 5), false).unwrap();
        let summary = witness_report(&series, 1e-9);
        prop_assert!((0.0..=1.0).contains(&summary.density));
        prop_assert_eq!(summary.witness_count, summary.witnesses.len());
        prop_assert!(summary.witnesses.windows(2).all(|w| w[0].p < w[1].p));
    }
}

#[test]
fn excluding_everything_is_vacuously_positive() {
    let excluded: BTreeSet<u64> = primes_up_to(MAX_PRIME).into_iter().collect();
    let series = build_adjoint_log_series(&[], &excluded, Window::new(MAX_PRIME, 5), false).unwrap();
    assert!(series.is_empty());
    let report = positive_type_scan(&series, 0.0);
    assert!(report.is_positive_type);
    assert_eq!(report.scanned, 0);
    assert_eq!(evaluate_incomplete(&series, 3.0).unwrap().value, 1.0);
}

#[test]
fn missing_primes_are_named() {
    let corpus = GL3Corpus::delta_sym_square(50).unwrap();
    let err = build_from_corpus(&corpus, &BTreeSet::new(), Window::new(60, 3), true).unwrap_err();
    assert_eq!(err, Error::IncompleteData { prime: 53 });
}

#[test]
fn evaluation_requires_s_above_two() {
    let corpus = GL3Corpus::delta_sym_square(30).unwrap();
    let series = build_from_corpus(&corpus, &BTreeSet::new(), Window::new(30, 3), true).unwrap();
    assert!(matches!(evaluate_incomplete(&series, 2.0), Err(Error::Domain(_))));
    assert!(evaluate_incomplete(&series, 2.5).is_ok());
}

#[test]
fn delta_lift_has_negative_first_coefficient() {
    let corpus = GL3Corpus::delta_sym_square(1000).unwrap();
    let series = build_from_corpus(&corpus, &BTreeSet::new(), Window::new(1000, 3), true).unwrap();
    let report = positive_type_scan(&series, 0.0);
    let first = report.first_negative.unwrap();
    assert_eq!((first.p, first.m), (2, 1));
    assert_eq!(first.exact.as_deref(), Some("-495/1024"));
    assert!(!report.is_positive_type);
}
