//! Adjoint lift of a GL(3) class and per-prime certification.
//!
//! The adjoint class is `A ⊗ conj(A)` with one eigenvalue 1 removed. Its
//! m-th power trace is `|tr A^m|² − 1`, which is how the coefficients are
//! computed here: from Hecke data through Newton's identities, without ever
//! solving the cubic. For a non-tempered class every such coefficient is
//! strictly positive, so a single negative one certifies temperedness.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::rational_to_f64;
use crate::multiset::canonical_sort;
use crate::satake::{
    classify, datum_power_traces, datum_power_traces_exact, elementary_symmetrics, roots_oracle,
    trace_bound_certificate, Classification, HeckeLocalDatum, UnitaryClass3, DEFAULT_TOL,
};

/// The eight adjoint eigenvalues at `p`, in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjointClass8 {
    pub p: u64,
    pub eigenvalues: [Complex64; 8],
}

impl AdjointClass8 {
    pub fn max_modulus(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// `{α_i·conj(α_j)}` minus the diagonal entry whose `|α_i|` is closest to 1.
pub fn adjoint_class(c: &UnitaryClass3) -> Result<AdjointClass8> {
    if classify(c, DEFAULT_TOL) == Classification::Inconsistent {
        return Err(Error::InvalidClass { p: c.p() });
    }
    let a = c.alphas();
    let drop = (0..3)
        .min_by(|&i, &j| (a[i].norm() - 1.0).abs().total_cmp(&(a[j].norm() - 1.0).abs()))
        .unwrap_or(0);
    let mut eigenvalues = [Complex64::new(0.0, 0.0); 8];
    let mut k = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i == j && i == drop {
                continue;
            }
            eigenvalues[k] = a[i] * a[j].conj();
            k += 1;
        }
    }
    canonical_sort(&mut eigenvalues);
    Ok(AdjointClass8 { p: c.p(), eigenvalues })
}

/// `a_{p^m}(Ad) = |tr A_p^m|² − 1`.
pub fn adjoint_coefficient(d: &HeckeLocalDatum, m: usize) -> f64 {
    if m == 0 {
        return 8.0;
    }
    adjoint_coefficients(d, m)[m - 1]
}

/// `a_{p^m}(Ad)` for `m = 1..=depth`.
pub fn adjoint_coefficients(d: &HeckeLocalDatum, depth: usize) -> Vec<f64> {
    datum_power_traces(d, depth)
        .as_slice()
        .iter()
        .map(|t| t.norm_sqr() - 1.0)
        .collect()
}

/// Exact `a_{p^m}(Ad)` for `m = 1..=depth`; `None` for floating data.
pub fn adjoint_coefficients_exact(d: &HeckeLocalDatum, depth: usize) -> Option<Vec<BigRational>> {
    let traces = datum_power_traces_exact(d, depth)?;
    Some(
        traces
            .as_slice()
            .iter()
            .map(|t| t.norm_sqr() - BigRational::one())
            .collect(),
    )
}

/// Coefficient of `p^{-ms}` in `log L(s, π_p × conj(π_p))`: `|t_m|²/m`.
pub fn rankin_log_coefficient(d: &HeckeLocalDatum, m: usize) -> f64 {
    let traces = datum_power_traces(d, m);
    traces.get(m).map_or(0.0, |t| t.norm_sqr() / m as f64)
}

/// Exact form of [`rankin_log_coefficient`].
pub fn rankin_log_coefficient_exact(d: &HeckeLocalDatum, m: usize) -> Option<BigRational> {
    let traces = datum_power_traces_exact(d, m)?;
    let t = traces.get(m)?;
    Some(t.norm_sqr() / BigRational::from_integer((m as u64).into()))
}

/// `ζ_p(s) = (1 − p^{-s})^{-1}`.
pub fn local_zeta(p: u64, s: Complex64) -> Complex64 {
    (Complex64::new(1.0, 0.0) - p_pow_neg(p, s)).inv()
}

fn p_pow_neg(p: u64, s: Complex64) -> Complex64 {
    (-s * (p as f64).ln()).exp()
}

fn euler_factor<'a>(
    p: u64,
    s: Complex64,
    roots: impl IntoIterator<Item = &'a Complex64> + Clone,
) -> Result<Complex64> {
    let x = p_pow_neg(p, s);
    let radius = roots.clone().into_iter().map(|r| r.norm()).fold(0.0, f64::max) * x.norm();
    if !(radius < 1.0) {
        return Err(Error::Domain(format!(
            "local factor at p = {p}, s = {s}: p^(-Re s)·max|root| = {radius} is not below 1"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let denom: Complex64 = roots.into_iter().map(|r| one - r * x).product();
    let value = denom.inv();
    if !(value.norm() > 0.0 && value.norm().is_finite()) {
        return Err(Error::Numeric(format!("local factor at p = {p} is not finite and nonzero")));
    }
    Ok(value)
}

/// `L(s, π_p × conj(π_p)) = ∏_{i,j} (1 − α_i·conj(α_j)·p^{-s})^{-1}`.
pub fn local_factor_rankin(c: &UnitaryClass3, s: Complex64) -> Result<Complex64> {
    let a = c.alphas();
    let pairs: Vec<Complex64> = a
        .iter()
        .flat_map(|x| a.iter().map(move |y| x * y.conj()))
        .collect();
    euler_factor(c.p(), s, pairs.iter())
}

/// `L(s, π_p; Ad)`, the Euler factor of the eight adjoint eigenvalues.
/// Each factor is finite and nonzero inside the domain, so the value is
/// never 0.
pub fn local_factor_adjoint(c: &UnitaryClass3, s: Complex64) -> Result<Complex64> {
    let ad = adjoint_class(c)?;
    euler_factor(c.p(), s, ad.eigenvalues.iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    RamanujanCertified,
    NonTemperedCertified,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reason {
    TraceBound,
    NegativeAdjointCoefficient,
    OracleRootModulus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// `|a_p|²`, as a fraction in exact mode.
    TraceNormSquared { value: f64, exact: Option<String> },
    PowerIndex { m: usize, coefficient: f64, exact: Option<String> },
    RootModulus { modulus: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RamanujanCertificate {
    pub p: u64,
    pub verdict: Verdict,
    pub reason: Option<Reason>,
    pub witness: Option<Witness>,
    pub exact: bool,
}

/// Knobs of [`certify_prime`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyParams {
    /// Largest power `m` searched for a negative adjoint coefficient.
    pub depth: usize,
    /// Negativity margin δ for floating coefficients. Exact data use 0.
    pub margin: f64,
    /// Modulus tolerance for the root oracle.
    pub tol: f64,
    /// Fall back to the root oracle when no certificate is found.
    pub oracle: bool,
    /// Use exact arithmetic when the datum carries exact values.
    pub exact: bool,
}

impl Default for CertifyParams {
    fn default() -> Self {
        Self { depth: 5, margin: 1e-9, tol: DEFAULT_TOL, oracle: true, exact: true }
    }
}

/// Certifies `p` as tempered (a Ramanujan prime), non-tempered, or leaves
/// it undetermined.
///
/// Order of checks: the trace bound `|a_p| ≤ 1`, then a negative adjoint
/// coefficient at some `m ≤ depth`, then (optionally) the root oracle.
pub fn certify_prime(d: &HeckeLocalDatum, params: &CertifyParams) -> Result<RamanujanCertificate> {
    let exact = params.exact && d.is_exact();
    let data = if exact { d.clone() } else { d.to_float() };
    let cert = |verdict, reason, witness| RamanujanCertificate {
        p: d.p(),
        verdict,
        reason: Some(reason),
        witness: Some(witness),
        exact,
    };

    if trace_bound_certificate(&data) {
        let witness = match data.exact_values() {
            Some(x) => {
                let n = x.trace.norm_sqr();
                Witness::TraceNormSquared { value: rational_to_f64(&n), exact: Some(n.to_string()) }
            }
            None => Witness::TraceNormSquared { value: data.trace().norm_sqr(), exact: None },
        };
        return Ok(cert(Verdict::RamanujanCertified, Reason::TraceBound, witness));
    }

    if params.depth > 0 {
        if exact {
            let coeffs = adjoint_coefficients_exact(&data, params.depth).unwrap_or_default();
            if let Some((i, c)) = coeffs.iter().enumerate().find(|(_, c)| c.is_negative()) {
                let witness = Witness::PowerIndex {
                    m: i + 1,
                    coefficient: rational_to_f64(c),
                    exact: Some(c.to_string()),
                };
                return Ok(cert(Verdict::RamanujanCertified, Reason::NegativeAdjointCoefficient, witness));
            }
        } else {
            let coeffs = adjoint_coefficients(&data, params.depth);
            if let Some((i, &c)) = coeffs.iter().enumerate().find(|(_, &c)| c < -params.margin) {
                let witness = Witness::PowerIndex { m: i + 1, coefficient: c, exact: None };
                return Ok(cert(Verdict::RamanujanCertified, Reason::NegativeAdjointCoefficient, witness));
            }
        }
    }

    if params.oracle {
        if let Some(verdict) = exact.then(|| exact_real_oracle(&data)).flatten() {
            let (v, modulus) = verdict;
            return Ok(cert(v, Reason::OracleRootModulus, Witness::RootModulus { modulus }));
        }
        let roots = roots_oracle(&elementary_symmetrics(&data), d.p(), params.tol)?;
        if classify(&roots, params.tol) == Classification::Inconsistent {
            return Err(Error::InvalidDatum {
                p: d.p(),
                reason: "root oracle found a class violating the unitarity symmetry".into(),
            });
        }
        let modulus = roots.max_modulus();
        let witness = Witness::RootModulus { modulus };
        if modulus >= 1.0 + params.margin.max(10.0 * params.tol) {
            return Ok(cert(Verdict::NonTemperedCertified, Reason::OracleRootModulus, witness));
        }
        if roots.alphas().iter().all(|z| (z.norm() - 1.0).abs() <= params.tol) {
            return Ok(cert(Verdict::RamanujanCertified, Reason::OracleRootModulus, witness));
        }
    }

    Ok(RamanujanCertificate { p: d.p(), verdict: Verdict::Undetermined, reason: None, witness: None, exact })
}

/// Exact decision for real trace and trivial central character. Then 1 is
/// a root and the others solve `β + β⁻¹ = a_p − 1`, so the class is
/// tempered iff `(a_p − 1)² ≤ 4`.
fn exact_real_oracle(d: &HeckeLocalDatum) -> Option<(Verdict, f64)> {
    let x = d.exact_values()?;
    if !(x.central.is_one() && x.trace.is_real()) {
        return None;
    }
    let c = x.trace.re.clone() - BigRational::one();
    let disc = &c * &c - BigRational::from_integer(4.into());
    if disc <= BigRational::zero() {
        Some((Verdict::RamanujanCertified, 1.0))
    } else {
        let cf = rational_to_f64(&c).abs();
        let modulus = (cf + rational_to_f64(&disc).sqrt()) / 2.0;
        Some((Verdict::NonTemperedCertified, modulus))
    }
}

/// [`certify_prime`] over many data in parallel; results sorted by prime.
pub fn certify_batch(
    data: &[HeckeLocalDatum],
    params: &CertifyParams,
) -> Vec<(u64, Result<RamanujanCertificate>)> {
    let mut out: Vec<_> = data.par_iter().map(|d| (d.p(), certify_prime(d, params))).collect();
    out.sort_by_key(|(p, _)| *p);
    out
}
