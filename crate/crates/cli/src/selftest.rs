//! Seeded invariant checks on generated data.
//!
//! Trial `k` of a run with seed `s` draws from a generator seeded with
//! `s + k` on a per-check stream, so a failing trial is reproduced by
//! `selftest --seed <s + k> --trials 1`.

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempered_core::adjoint::adjoint_coefficients;
use tempered_core::ingest::{delta_qexpansion, sym_square_datum};
use tempered_core::primes::first_primes;
use tempered_core::sample::{random_consistent_class, random_nontempered_class};
use tempered_core::satake::datum_power_traces;
use tempered_core::{
    certify_prime, elementary_symmetrics, local_factor_adjoint, local_factor_rankin, local_zeta, roots_oracle,
    CertifyParams, GL3Corpus, HeckeLocalDatum, Verdict, DEFAULT_TOL,
};

use crate::report::{CheckResult, FailureRecord, SelftestSection};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelftestOptions {
    pub seed: u64,
    pub trials: usize,
    /// Corrupts the Newton traces, to prove failures are detected.
    pub inject_fault: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, trials: DEFAULT_TRIALS, inject_fault: false }
    }
}

type Trial = fn(&mut ChaCha8Rng, &SelftestOptions) -> Result<(), String>;

const CHECKS: [(&str, Trial); 4] = [
    ("newton-vs-oracle", newton_vs_oracle),
    ("factorization", factorization),
    ("local-positivity", local_positivity),
    ("lift-correctness", lift_correctness),
];

pub fn run_selftest(opts: &SelftestOptions) -> SelftestSection {
    let mut checks: Vec<CheckResult> = CHECKS
        .iter()
        .enumerate()
        .map(|(stream, (name, trial))| {
            let failures: Vec<FailureRecord> = (0..opts.trials)
                .filter_map(|k| {
                    let seed = opts.seed.wrapping_add(k as u64);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(stream as u64);
                    trial(&mut rng, opts).err().map(|detail| FailureRecord { trial: k, seed, detail })
                })
                .collect();
            CheckResult { name: name.to_string(), trials: opts.trials, passed: failures.is_empty(), failures }
        })
        .collect();
    checks.push(delta_lift_check());
    SelftestSection {
        seed: opts.seed,
        trials: opts.trials,
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn newton_vs_oracle(rng: &mut ChaCha8Rng, opts: &SelftestOptions) -> Result<(), String> {
    let class = random_consistent_class(rng, &first_primes(100));
    let d = HeckeLocalDatum::from_class(&class).map_err(|e| e.to_string())?;
    let roots = roots_oracle(&elementary_symmetrics(&d), d.p(), DEFAULT_TOL).map_err(|e| e.to_string())?;
    let mut traces = datum_power_traces(&d, 20).into_vec();
    if opts.inject_fault {
        traces[1] += Complex64::new(1e-6, 0.0);
    }
    for (i, t) in traces.iter().enumerate() {
        let m = i as i32 + 1;
        let direct: Complex64 = roots.alphas().iter().map(|r| r.powi(m)).sum();
        let scale: f64 = roots.alphas().iter().map(|r| r.norm().powi(m)).sum();
        let err = (t - direct).norm() / scale;
        if !(err <= 1e-10) {
            return Err(format!("p = {}, m = {m}: Newton {t} vs oracle {direct} (relative {err:e})", d.p()));
        }
    }
    Ok(())
}

fn factorization(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Result<(), String> {
    let class = random_consistent_class(rng, &first_primes(100));
    for s in [1.5, 2.0, 3.0] {
        let s = Complex64::new(s, 0.0);
        let rankin = local_factor_rankin(&class, s).map_err(|e| e.to_string())?;
        let adjoint = local_factor_adjoint(&class, s).map_err(|e| e.to_string())?;
        let err = (rankin - local_zeta(class.p(), s) * adjoint).norm() / rankin.norm();
        if !(err <= 1e-12) {
            return Err(format!("p = {}, s = {}: relative residual {err:e}", class.p(), s.re));
        }
    }
    Ok(())
}

fn local_positivity(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Result<(), String> {
    let p = first_primes(100)[rng.gen_range(0..100)];
    let (class, shape) = random_nontempered_class(rng, p);
    let d = HeckeLocalDatum::from_class(&class).map_err(|e| e.to_string())?;
    for (i, a) in adjoint_coefficients(&d, 20).into_iter().enumerate() {
        if !(a > 0.0) {
            return Err(format!("p = {p}, t = {}, theta = {}, m = {}: coefficient {a}", shape.t, shape.theta, i + 1));
        }
    }
    Ok(())
}

fn lift_correctness(rng: &mut ChaCha8Rng, _: &SelftestOptions) -> Result<(), String> {
    let p = first_primes(100)[rng.gen_range(0..100)];
    let lambda_sq = BigRational::new(rng.gen_range(0..5000).into(), rng.gen_range(1..1000).into());
    let d = sym_square_datum(&lambda_sq, p).map_err(|e| e.to_string())?;
    let roots = roots_oracle(&elementary_symmetrics(&d), p, DEFAULT_TOL).map_err(|e| e.to_string())?;
    let a = roots.alphas();
    let shape = (0..3).find_map(|k| {
        let rest: Vec<Complex64> = (0..3).filter(|&j| j != k).map(|j| a[j]).collect();
        ((a[k] - 1.0).norm() < 1e-7 && (rest[0] * rest[1] - 1.0).norm() < 1e-7).then_some(rest[0])
    });
    let Some(beta) = shape else {
        return Err(format!("p = {p}, lambda^2 = {lambda_sq}: roots {a:?} are not {{b, 1, 1/b}}"));
    };
    let deligne = lambda_sq <= BigRational::from_integer(4.into());
    if ((beta.norm() - 1.0).abs() < 1e-6) != deligne {
        return Err(format!("p = {p}, lambda^2 = {lambda_sq}: |b| = {} disagrees with the Deligne range", beta.norm()));
    }
    Ok(())
}

/// Known values of τ, and the lift of Δ to `p ≤ 100` certified tempered.
fn delta_lift_check() -> CheckResult {
    let mut failures = Vec::new();
    let mut fail = |detail: String| failures.push(FailureRecord { trial: 0, seed: 0, detail });
    match delta_qexpansion(100) {
        Ok(tau) => {
            for (p, expected) in [(2u64, -24i128), (3, 252), (5, 4830), (7, -16744), (11, 534612), (13, -577738)] {
                if tau.get(&p) != Some(&expected) {
                    fail(format!("tau({p}) = {:?}, expected {expected}", tau.get(&p)));
                }
            }
        }
        Err(e) => fail(e.to_string()),
    }
    match GL3Corpus::delta_sym_square(100) {
        Ok(corpus) => {
            for d in corpus.data().values() {
                match certify_prime(d, &CertifyParams::default()) {
                    Ok(c) if c.verdict == Verdict::RamanujanCertified && c.exact => {}
                    other => fail(format!("Sym2 Delta at p = {}: {other:?}", d.p())),
                }
            }
        }
        Err(e) => fail(e.to_string()),
    }
    CheckResult { name: "delta-lift".into(), trials: 1, passed: failures.is_empty(), failures }
}
