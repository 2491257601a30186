//! Random classes and parameters for invariant checks.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::archimedean::ArchParams;
use crate::satake::{NonTemperedShape, UnitaryClass3};

/// Largest exponent drawn for non-tempered classes.
pub const MAX_T: f64 = 0.49;

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

/// `t` uniform in `(0, max_t]`, `u` and `w` uniform on the unit circle.
pub fn random_shape<R: Rng + ?Sized>(rng: &mut R, max_t: f64) -> NonTemperedShape {
    let t = max_t * (1.0 - rng.gen::<f64>());
    NonTemperedShape::from_args(t, rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
}

pub fn random_tempered_class<R: Rng + ?Sized>(rng: &mut R, p: u64) -> UnitaryClass3 {
    let alphas = [random_unit(rng), random_unit(rng), random_unit(rng)];
    UnitaryClass3::new(p, alphas).expect("unit entries are nonzero")
}

pub fn random_nontempered_class<R: Rng + ?Sized>(rng: &mut R, p: u64) -> (UnitaryClass3, NonTemperedShape) {
    let shape = random_shape(rng, MAX_T);
    let class = UnitaryClass3::from_shape(p, &shape).expect("shape entries are nonzero");
    (class, shape)
}

/// Tempered or non-tempered with equal probability, at a prime drawn from
/// `primes`, entries in random order.
pub fn random_consistent_class<R: Rng + ?Sized>(rng: &mut R, primes: &[u64]) -> UnitaryClass3 {
    let p = primes[rng.gen_range(0..primes.len())];
    let class = if rng.gen_bool(0.5) {
        random_tempered_class(rng, p)
    } else {
        random_nontempered_class(rng, p).0
    };
    let mut perm = [0usize, 1, 2];
    for i in (1..3).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    class.permuted(perm)
}

/// Valid spherical archimedean parameters, tempered or not with equal
/// probability.
pub fn random_arch_params<R: Rng + ?Sized>(rng: &mut R) -> ArchParams {
    if rng.gen_bool(0.5) {
        let z = [0, 1, 2].map(|_| Complex64::new(0.0, rng.gen_range(-10.0..10.0)));
        ArchParams::spherical(z).expect("purely imaginary parameters are unitary")
    } else {
        let t = 0.5 * (1.0 - rng.gen::<f64>());
        ArchParams::from_shape(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), t)
            .expect("shape parameters are unitary")
    }
}
