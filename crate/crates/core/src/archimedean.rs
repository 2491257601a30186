//! Archimedean gamma factors and the pole of the adjoint factor at `s = 0`.
//!
//! Parameters are additive: `L(s, π_∞) = ∏ Γ_R(s + z_j + δ_j)`. Unitarity
//! makes every `Re z_j = 0` (tempered) or leaves one purely imaginary `z`
//! and a pair `u ± t` with `Re u = 0`, `t > 0`. The adjoint parameters are
//! `{z_i + conj(z_j)}` with one 0 removed; 0 always survives, so
//! `Γ_R(s)` divides the adjoint factor and it has a pole at `s = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiset::canonical_sort;

/// Distance to `{0, −2, −4, …}` under which a point counts as a pole.
pub const POLE_TOL: f64 = 1e-9;

/// Tolerance for the unitarity conditions on `z`.
pub const PARAM_TOL: f64 = 1e-9;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Bernoulli coefficients `B_{2k} / (2k(2k−1))` of the Stirling series.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `log Γ(z)` up to an integer multiple of `2πi`. Callers exponentiate, so
/// the branch does not matter.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z)Γ(1 − z) = π / sin(πz)
        let sin = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    // Γ(z) = Γ(z + n) / (z(z+1)…(z+n−1)), shifted until Stirling is accurate.
    let mut product = Complex64::new(1.0, 0.0);
    let mut w = z;
    while w.norm() < 17.0 {
        product *= w;
        w += 1.0;
    }
    let shift = product.ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for c in STIRLING {
        series += power * c;
        power *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series - shift
}

/// Γ(z). Poles at the nonpositive integers are the caller's concern.
pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

fn distance_to_pole_set(s: Complex64) -> f64 {
    // Nearest point of {0, −2, −4, …}.
    let k = (-s.re / 2.0).round().max(0.0);
    (s - Complex64::new(-2.0 * k, 0.0)).norm()
}

fn is_pole(s: Complex64) -> bool {
    distance_to_pole_set(s) <= POLE_TOL
}

/// `Γ_R(s) = π^{−s/2}·Γ(s/2)`; simple poles at `0, −2, −4, …`.
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    if is_pole(s) {
        return Err(Error::Pole { order: 1 });
    }
    let half = s / 2.0;
    Ok((ln_gamma(half) - half * PI.ln()).exp())
}

/// `(z₁, z₂, z₃)` and shifts `δ_j ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchParams {
    z: [Complex64; 3],
    delta: [u8; 3],
}

impl ArchParams {
    /// Validates the unitarity dichotomy on `z` and the range of `δ`.
    pub fn new(z: [Complex64; 3], delta: [u8; 3]) -> Result<Self> {
        if delta.iter().any(|&d| d > 1) {
            return Err(Error::InvalidParams(format!("delta {delta:?} must lie in {{0, 1}}")));
        }
        if z.iter().any(|x| !(x.re.is_finite() && x.im.is_finite())) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        let params = Self { z, delta };
        if params.is_tempered() || params.nontempered_pair().is_some() {
            Ok(params)
        } else {
            Err(Error::InvalidParams(format!(
                "z = ({}, {}, {}) is neither purely imaginary nor of the form (iy, u + t, u − t)",
                z[0], z[1], z[2]
            )))
        }
    }

    /// `δ = (0, 0, 0)`.
    pub fn spherical(z: [Complex64; 3]) -> Result<Self> {
        Self::new(z, [0; 3])
    }

    /// `(iy, u + t, u − t)` with `u = i·u_im`.
    pub fn from_shape(y: f64, u_im: f64, t: f64) -> Result<Self> {
        let u = Complex64::new(0.0, u_im);
        Self::spherical([Complex64::new(0.0, y), u + t, u - t])
    }

    pub fn z(&self) -> &[Complex64; 3] {
        &self.z
    }

    pub fn delta(&self) -> &[u8; 3] {
        &self.delta
    }

    pub fn is_tempered(&self) -> bool {
        self.z.iter().all(|x| x.re.abs() <= PARAM_TOL)
    }

    /// Index of the purely imaginary parameter when the other two are
    /// `u ± t` with `Re u = 0`, `t > 0`.
    fn nontempered_pair(&self) -> Option<usize> {
        (0..3).find(|&k| {
            let [i, j] = match k {
                0 => [1, 2],
                1 => [0, 2],
                _ => [0, 1],
            };
            let (a, b) = (self.z[i], self.z[j]);
            self.z[k].re.abs() <= PARAM_TOL
                && (a.re + b.re).abs() <= PARAM_TOL
                && (a.im - b.im).abs() <= PARAM_TOL
                && a.re.abs() > PARAM_TOL
        })
    }
}

/// The eight adjoint parameters `B`, in canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArchAdjointSet {
    pub b: [Complex64; 8],
}

/// `{z_i + conj(z_j)}` minus the diagonal term `2·Re z_i` closest to 0.
pub fn arch_adjoint_set(params: &ArchParams) -> ArchAdjointSet {
    let z = params.z;
    let drop = (0..3)
        .min_by(|&i, &j| z[i].re.abs().total_cmp(&z[j].re.abs()))
        .unwrap_or(0);
    let mut b = [Complex64::new(0.0, 0.0); 8];
    let mut k = 0;
    for i in 0..3 {
        for j in 0..3 {
            if i == j && i == drop {
                continue;
            }
            let v = z[i] + z[j].conj();
            // Diagonal terms are real by construction.
            b[k] = if i == j { Complex64::new(v.re, 0.0) } else { v };
            k += 1;
        }
    }
    canonical_sort(&mut b);
    ArchAdjointSet { b }
}

/// `∏_{b∈B} Γ_R(s + b)`; at a pole, the error carries the total order.
pub fn adjoint_gamma_factor(params: &ArchParams, s: Complex64) -> Result<Complex64> {
    let set = arch_adjoint_set(params);
    let order = set.b.iter().filter(|&&b| is_pole(s + b)).count();
    if order > 0 {
        return Err(Error::Pole { order });
    }
    set.b.iter().map(|&b| gamma_r(s + b)).product()
}

/// Number of `b ∈ B` in `{0, −2, −4, …}`: the pole order of the adjoint
/// factor at `s = 0`.
pub fn pole_order_at_zero(params: &ArchParams) -> usize {
    arch_adjoint_set(params).b.iter().filter(|&&b| is_pole(b)).count()
}

/// `∏_j Γ_R(s + z_j + δ_j)`.
pub fn standard_gamma_factor(params: &ArchParams, s: Complex64) -> Result<Complex64> {
    let shifted: Vec<Complex64> = (0..3).map(|j| s + params.z[j] + f64::from(params.delta[j])).collect();
    let order = shifted.iter().filter(|&&x| is_pole(x)).count();
    if order > 0 {
        return Err(Error::Pole { order });
    }
    shifted.into_iter().map(gamma_r).product()
}
