//! Unramified GL(3) Satake classes.
//!
//! A class is an unordered triple `{α₁, α₂, α₃}` of nonzero complex numbers.
//! Unitarity forces the multiset of conjugates to equal the multiset of
//! inverses, so a class is either tempered (all `|α| = 1`) or of the shape
//! `{u·p^t, u·p^{-t}, w}` with `t > 0` and `|u| = |w| = 1`.
//!
//! Classes are usually known only through Hecke data: the trace `a_p` and
//! the central character value `ω_p = α₁α₂α₃`. Unitarity gives the middle
//! elementary symmetric function for free (`e₂ = ω_p·conj(a_p)`), so the
//! characteristic cubic, and with it every power trace, is determined by
//! `(a_p, ω_p)` alone.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::multiset::{arg_0_2pi, canonical_sort, multiset_eq};
use crate::primes::is_prime;

/// Default tolerance for modulus comparisons in floating mode.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Exact Hecke data over `Q(i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactHecke {
    pub trace: GaussianRational,
    pub central: GaussianRational,
}

impl ExactHecke {
    /// `(e₁, e₂, e₃) = (a_p, ω_p·conj(a_p), ω_p)`.
    pub fn elementary_symmetrics(&self) -> [GaussianRational; 3] {
        [
            self.trace.clone(),
            self.central.clone() * self.trace.conj(),
            self.central.clone(),
        ]
    }
}

/// A prime together with the trace and central character value of its
/// Satake class.
#[derive(Debug, Clone, PartialEq)]
pub struct HeckeLocalDatum {
    p: u64,
    trace: Complex64,
    central: Complex64,
    exact: Option<ExactHecke>,
}

impl HeckeLocalDatum {
    /// Floating-point datum. `|ω_p|` must be 1 within [`DEFAULT_TOL`].
    pub fn new(p: u64, trace: Complex64, central: Complex64) -> Result<Self> {
        check_prime(p)?;
        if !(trace.re.is_finite() && trace.im.is_finite()) {
            return Err(invalid(p, "trace is not finite"));
        }
        if !((central.norm() - 1.0).abs() <= DEFAULT_TOL) {
            return Err(invalid(p, format!("|omega_p| = {} is not 1", central.norm())));
        }
        Ok(Self { p, trace, central, exact: None })
    }

    /// Exact datum over `Q(i)`; `|ω_p|² = 1` is checked exactly.
    pub fn exact(p: u64, trace: GaussianRational, central: GaussianRational) -> Result<Self> {
        check_prime(p)?;
        if !central.norm_sqr().is_one() {
            return Err(invalid(p, format!("|omega_p|^2 = {} is not 1", central.norm_sqr())));
        }
        Ok(Self {
            p,
            trace: trace.to_complex(),
            central: central.to_complex(),
            exact: Some(ExactHecke { trace, central }),
        })
    }

    /// Trivial central character, real exact trace.
    pub fn exact_real(p: u64, trace: BigRational) -> Result<Self> {
        Self::exact(p, GaussianRational::real(trace), GaussianRational::one())
    }

    /// Hecke data of an explicit class: the trace and the determinant.
    pub fn from_class(class: &UnitaryClass3) -> Result<Self> {
        let central = class.determinant();
        Self::new(class.p(), class.trace(), central / central.norm())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn trace(&self) -> Complex64 {
        self.trace
    }

    pub fn central(&self) -> Complex64 {
        self.central
    }

    pub fn exact_values(&self) -> Option<&ExactHecke> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Drops the exact representation, keeping the floating values.
    pub fn to_float(&self) -> Self {
        Self { exact: None, ..self.clone() }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(invalid(p, "p is not prime"))
    }
}

fn invalid(p: u64, reason: impl Into<String>) -> Error {
    Error::InvalidDatum { p, reason: reason.into() }
}

/// Coefficients of the monic cubic `X³ − e₁X² + e₂X − e₃`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElementarySymmetrics {
    pub e1: Complex64,
    pub e2: Complex64,
    pub e3: Complex64,
}

impl ElementarySymmetrics {
    /// Elementary symmetric functions of an explicit triple.
    pub fn of_roots(r: &[Complex64; 3]) -> Self {
        Self {
            e1: r[0] + r[1] + r[2],
            e2: r[0] * r[1] + r[0] * r[2] + r[1] * r[2],
            e3: r[0] * r[1] * r[2],
        }
    }

    /// `(f(z), f'(z))` for the characteristic cubic.
    fn eval(&self, z: Complex64) -> (Complex64, Complex64) {
        let f = ((z - self.e1) * z + self.e2) * z - self.e3;
        let df = (z * 3.0 - self.e1 * 2.0) * z + self.e2;
        (f, df)
    }

    /// Relative backward error of `z` as a root.
    fn backward_error(&self, z: Complex64) -> f64 {
        let r = z.norm();
        let scale = r * r * r + self.e1.norm() * r * r + self.e2.norm() * r + self.e3.norm();
        self.eval(z).0.norm() / scale
    }

    /// Worst relative mismatch between these coefficients and the ones
    /// rebuilt from `roots`.
    fn coefficient_residual(&self, roots: &[Complex64; 3]) -> f64 {
        let rebuilt = Self::of_roots(roots);
        let m: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
        let s1 = m[0] + m[1] + m[2];
        let s2 = m[0] * m[1] + m[0] * m[2] + m[1] * m[2];
        let s3 = m[0] * m[1] * m[2];
        let rel = |d: Complex64, s: f64| d.norm() / s.max(f64::MIN_POSITIVE);
        rel(rebuilt.e1 - self.e1, s1)
            .max(rel(rebuilt.e2 - self.e2, s2))
            .max(rel(rebuilt.e3 - self.e3, s3))
    }
}

/// `(e₁, e₂, e₃) = (a_p, ω_p·conj(a_p), ω_p)`.
pub fn elementary_symmetrics(d: &HeckeLocalDatum) -> ElementarySymmetrics {
    ElementarySymmetrics {
        e1: d.trace,
        e2: d.central * d.trace.conj(),
        e3: d.central,
    }
}

/// Power traces `t_m = α₁^m + α₂^m + α₃^m` for `m = 1..=depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerTraceSeq<T = Complex64> {
    traces: Vec<T>,
}

impl<T> PowerTraceSeq<T> {
    /// `t_m`, 1-indexed.
    pub fn get(&self, m: usize) -> Option<&T> {
        m.checked_sub(1).and_then(|i| self.traces.get(i))
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.traces
    }

    pub fn into_vec(self) -> Vec<T> {
        self.traces
    }
}

/// Newton's identities for a cubic, over any commutative ring the caller
/// supplies (`Complex64` or exact Gaussian rationals).
pub fn power_traces<T>(e1: &T, e2: &T, e3: &T, depth: usize) -> PowerTraceSeq<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut traces: Vec<T> = Vec::with_capacity(depth);
    for m in 1..=depth {
        let next = match m {
            1 => e1.clone(),
            2 => e1.clone() * traces[0].clone() - (e2.clone() + e2.clone()),
            3 => {
                e1.clone() * traces[1].clone() - e2.clone() * traces[0].clone()
                    + (e3.clone() + e3.clone() + e3.clone())
            }
            _ => {
                e1.clone() * traces[m - 2].clone() - e2.clone() * traces[m - 3].clone()
                    + e3.clone() * traces[m - 4].clone()
            }
        };
        traces.push(next);
    }
    PowerTraceSeq { traces }
}

/// Floating power traces of a datum.
pub fn datum_power_traces(d: &HeckeLocalDatum, depth: usize) -> PowerTraceSeq {
    let e = elementary_symmetrics(d);
    power_traces(&e.e1, &e.e2, &e.e3, depth)
}

/// Exact power traces of a datum, when it carries exact values.
pub fn datum_power_traces_exact(
    d: &HeckeLocalDatum,
    depth: usize,
) -> Option<PowerTraceSeq<GaussianRational>> {
    let [e1, e2, e3] = d.exact_values()?.elementary_symmetrics();
    Some(power_traces(&e1, &e2, &e3, depth))
}

/// An unordered triple of nonzero complex numbers attached to a prime.
///
/// Construction only checks that entries are finite and nonzero; the
/// unitarity symmetry is a verdict of [`classify`], not a type invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryClass3 {
    p: u64,
    alphas: [Complex64; 3],
}

impl UnitaryClass3 {
    pub fn new(p: u64, alphas: [Complex64; 3]) -> Result<Self> {
        check_prime(p)?;
        for a in &alphas {
            if !(a.re.is_finite() && a.im.is_finite()) || a.norm() == 0.0 {
                return Err(invalid(p, format!("class entry {a} is zero or not finite")));
            }
        }
        Ok(Self { p, alphas })
    }

    /// `{u·p^t, u·p^{-t}, w}`.
    pub fn from_shape(p: u64, shape: &NonTemperedShape) -> Result<Self> {
        Self::new(p, shape.entries(p))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn alphas(&self) -> &[Complex64; 3] {
        &self.alphas
    }

    pub fn trace(&self) -> Complex64 {
        self.alphas.iter().sum()
    }

    pub fn determinant(&self) -> Complex64 {
        self.alphas.iter().product()
    }

    pub fn max_modulus(&self) -> f64 {
        self.alphas.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Same class with entries permuted.
    pub fn permuted(&self, perm: [usize; 3]) -> Self {
        Self { p: self.p, alphas: perm.map(|i| self.alphas[i]) }
    }

    /// `min_σ max_i |conj(α_i)·α_σ(i) − 1|`; zero exactly when the
    /// conjugate multiset equals the inverse multiset.
    pub fn unitarity_defect(&self) -> f64 {
        const PERMS: [[usize; 3]; 6] =
            [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        PERMS
            .iter()
            .map(|s| {
                (0..3)
                    .map(|i| (self.alphas[i].conj() * self.alphas[s[i]] - 1.0).norm())
                    .fold(0.0, f64::max)
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Parameters of a non-tempered class `{u·p^t, u·p^{-t}, w}`, with
/// `u^{-1}w = e^{iθ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NonTemperedShape {
    pub t: f64,
    pub u: Complex64,
    pub w: Complex64,
    pub theta: f64,
}

impl NonTemperedShape {
    /// Builds the shape from `t` and the arguments of `u` and `w`.
    pub fn from_args(t: f64, arg_u: f64, arg_w: f64) -> Self {
        let u = Complex64::from_polar(1.0, arg_u);
        let w = Complex64::from_polar(1.0, arg_w);
        Self { t, u, w, theta: arg_0_2pi(u.conj() * w) }
    }

    pub fn entries(&self, p: u64) -> [Complex64; 3] {
        let pt = (p as f64).powf(self.t);
        [self.u * pt, self.u / pt, self.w]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Classification {
    Tempered,
    NonTempered(NonTemperedShape),
    Inconsistent,
}

/// Tempered / non-tempered / inconsistent verdict for a class.
///
/// The non-tempered shape is canonical: `u·p^t` is the entry of largest
/// modulus, and `w` is the remaining entry closest to the unit circle.
pub fn classify(c: &UnitaryClass3, tol: f64) -> Classification {
    if !(c.unitarity_defect() <= tol) {
        return Classification::Inconsistent;
    }
    if c.alphas.iter().all(|a| (a.norm() - 1.0).abs() <= tol) {
        return Classification::Tempered;
    }
    let mut entries = c.alphas;
    entries.sort_by(|x, y| y.norm().total_cmp(&x.norm()));
    let top = entries[0];
    if top.norm() <= 1.0 {
        return Classification::Inconsistent;
    }
    let t = top.norm().ln() / (c.p as f64).ln();
    let u = top / top.norm();
    let rest = [entries[1], entries[2]];
    let w_raw = if (rest[0].norm() - 1.0).abs() <= (rest[1].norm() - 1.0).abs() {
        rest[0]
    } else {
        rest[1]
    };
    let w = w_raw / w_raw.norm();
    let shape = NonTemperedShape { t, u, w, theta: arg_0_2pi(u.conj() * w) };
    if multiset_eq(&c.alphas, &shape.entries(c.p), tol) {
        Classification::NonTempered(shape)
    } else {
        Classification::Inconsistent
    }
}

/// Ground-truth roots of `X³ − e₁X² + e₂X − e₃`.
///
/// Aberth–Ehrlich simultaneous iteration, Newton polishing, then
/// replacement of numerically split multiple roots by the matching root of
/// f′ or f″ when the merged triple reproduces the coefficients. Unitary
/// coefficients get roots rebuilt in the symmetric shape.
/// Output is in canonical order, so permutations of equivalent inputs give
/// identical results.
pub fn roots_oracle(sym: &ElementarySymmetrics, p: u64, tol: f64) -> Result<UnitaryClass3> {
    let radius = sym.e3.norm().cbrt();
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Numeric(format!("cubic has e3 = {} (need nonzero)", sym.e3)));
    }
    let mut z: [Complex64; 3] =
        std::array::from_fn(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / 3.0));

    for _ in 0..500 {
        let mut worst = 0.0f64;
        for k in 0..3 {
            let (f, df) = sym.eval(z[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..3 {
                if j != k {
                    let gap = z[k] - z[j];
                    if gap.norm() > 0.0 {
                        repulsion += gap.inv();
                    }
                }
            }
            let ratio = if df.norm() > 0.0 { f / df } else { f };
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() > 0.0 { ratio / denom } else { ratio };
            z[k] -= step;
            worst = worst.max(step.norm() / z[k].norm().max(f64::MIN_POSITIVE));
        }
        if worst < 1e-15 {
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..4 {
            let (f, df) = sym.eval(*root);
            if df.norm() == 0.0 {
                break;
            }
            let candidate = *root - f / df;
            if sym.backward_error(candidate) < sym.backward_error(*root) {
                *root = candidate;
            } else {
                break;
            }
        }
    }

    let z = merge_clusters(sym, z);
    let z = match unitary_split(sym, &z) {
        Some(u) if max_backward_error(sym, &u) <= max_backward_error(sym, &z).max(1e3 * f64::EPSILON) => u,
        _ => z,
    };

    if z.iter().any(|r| !(r.re.is_finite() && r.im.is_finite())) {
        return Err(Error::Numeric("cubic iteration diverged".into()));
    }
    let worst = max_backward_error(sym, &z);
    if !(worst <= tol.max(1e3 * f64::EPSILON)) {
        return Err(Error::Numeric(format!(
            "cubic roots reached backward error {worst:e}, above tolerance {tol:e}"
        )));
    }
    let mut z = z;
    canonical_sort(&mut z);
    UnitaryClass3::new(p, z)
}

fn max_backward_error(sym: &ElementarySymmetrics, z: &[Complex64; 3]) -> f64 {
    z.iter().map(|r| sym.backward_error(*r)).fold(0.0, f64::max)
}

/// Rebuilds the roots of a unitary cubic in the exact shape the symmetry
/// forces: a unit root `w` and a pair `h·Y` with `h² = e₃/w` and
/// `Y² − xY + 1 = 0` for real `x`.
///
/// `None` unless the coefficients satisfy `|e₃| = 1` and `e₂ = e₃·conj(e₁)`.
fn unitary_split(sym: &ElementarySymmetrics, z: &[Complex64; 3]) -> Option<[Complex64; 3]> {
    const GATE: f64 = 1e-9;
    let scale = sym.e1.norm().max(1.0);
    if (sym.e3.norm() - 1.0).abs() > GATE || (sym.e2 - sym.e3 * sym.e1.conj()).norm() > GATE * scale {
        return None;
    }
    let nearest = z
        .iter()
        .copied()
        .min_by(|a, b| (a.norm() - 1.0).abs().total_cmp(&(b.norm() - 1.0).abs()))?;
    let w = nearest / nearest.norm();
    let q = sym.e3 / w;
    let h = (q / q.norm()).sqrt();
    let x = ((sym.e1 - w) / h).re;
    let (y1, y2) = if x.abs() <= 2.0 {
        let y = Complex64::new(x / 2.0, (1.0 - x * x / 4.0).max(0.0).sqrt());
        (y, y.conj())
    } else {
        let big = (x + x.signum() * (x * x - 4.0).sqrt()) / 2.0;
        (Complex64::new(big, 0.0), Complex64::new(1.0 / big, 0.0))
    };
    Some([w, h * y1, h * y2])
}

fn merge_clusters(sym: &ElementarySymmetrics, z: [Complex64; 3]) -> [Complex64; 3] {
    // A merged triple must reproduce the coefficients to working precision;
    // two distinct roots at distance d only manage ~d², so only genuine
    // multiple roots qualify.
    const MERGE_RESIDUAL: f64 = 64.0 * f64::EPSILON;
    let scale = z.iter().map(|r| r.norm()).fold(0.0, f64::max);
    let near = |a: Complex64, b: Complex64, rel: f64| (a - b).norm() <= rel * scale;

    // A triple root is the root of f'' = 6X − 2e₁.
    if near(z[0], z[1], 1e-3) && near(z[0], z[2], 1e-3) && near(z[1], z[2], 1e-3) {
        let m = sym.e1 / 3.0;
        let merged = [m, m, m];
        if sym.coefficient_residual(&merged) <= MERGE_RESIDUAL {
            return merged;
        }
    }
    // A double root is a simple root of f' = 3X² − 2e₁X + e₂.
    let disc = (sym.e1 * sym.e1 - sym.e2 * 3.0).sqrt();
    let critical = [(sym.e1 + disc) / 3.0, (sym.e1 - disc) / 3.0];
    let mut best: Option<([Complex64; 3], f64)> = None;
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !near(z[i], z[j], 1e-5) {
            continue;
        }
        let mean = (z[i] + z[j]) / 2.0;
        let c = if (critical[0] - mean).norm() <= (critical[1] - mean).norm() {
            critical[0]
        } else {
            critical[1]
        };
        let merged = [c, c, sym.e1 - c * 2.0];
        let res = sym.coefficient_residual(&merged);
        if res <= MERGE_RESIDUAL && best.is_none_or(|(_, r)| res < r) {
            best = Some((merged, res));
        }
    }
    best.map_or(z, |(m, _)| m)
}

/// True when `|a_p| ≤ 1`, decided exactly for exact data.
///
/// Sufficient for temperedness: a non-tempered class has
/// `|a_p|² = 3 + p^{2t} + p^{-2t} + 2cosθ(p^t + p^{-t}) ≥ (p^t + p^{-t} − 1)² > 1`.
pub fn trace_bound_certificate(d: &HeckeLocalDatum) -> bool {
    match d.exact_values() {
        Some(x) => x.trace.norm_sqr() <= BigRational::one(),
        None => d.trace.norm_sqr() <= 1.0,
    }
}

/// `|a_p|²` of the class `{u·p^t, u·p^{-t}, w}` in closed form.
pub fn trace_squared_formula(shape: &NonTemperedShape, p: u64) -> f64 {
    let pt = (p as f64).powf(shape.t);
    let sum = pt + 1.0 / pt;
    3.0 + pt * pt + 1.0 / (pt * pt) + 2.0 * shape.theta.cos() * sum
}
