//! Corpus ingestion and desk-scale test data.
//!
//! Three plain-text formats share one layout: `#` comment lines, a single
//! typed header line `format=<kind> [key=value ...]`, then whitespace
//! separated rows.
//!
//! ```text
//! format=gl3 [ramified=3,7]       rows: p  Re a_p  Im a_p  [Re ω_p  Im ω_p]
//! format=gl2 weight=12 level=1    rows: p  a_p(f)            (integer)
//! format=synthetic [ramified=..]  rows: p  t  θ  arg u  arg w
//! ```
//!
//! In `gl3` rows, integer or `n/d` tokens are exact; anything else is read
//! as a float. A row is exact only if every token is. `ω_p` defaults to 1.
//! `gl2` data are lifted by the symmetric square, `{α, α⁻¹} ↦ {α², 1, α⁻²}`,
//! and stay exact. Angles in `synthetic` rows may be written with `pi`
//! (`pi`, `-pi/2`, `2*pi/3`).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{parse_rational, rational_to_f64, GaussianRational};
use crate::primes::{is_prime, prime_divisors, primes_up_to};
use crate::satake::{HeckeLocalDatum, NonTemperedShape, UnitaryClass3, DEFAULT_TOL};

/// Largest `P_max` accepted by [`delta_qexpansion`].
pub const DELTA_MAX: u64 = 10_000;

/// Hecke eigenvalues `a_p(f)` of a classical newform at primes.
#[derive(Debug, Clone, PartialEq)]
pub struct NewformRecord {
    pub weight: u32,
    pub level: u64,
    pub coefficients: BTreeMap<u64, BigInt>,
}

impl NewformRecord {
    /// Whether `|a_p| ≤ 2p^{(k−1)/2}`, checked exactly as
    /// `a_p² ≤ 4p^{k−1}`. Recorded as metadata, never enforced.
    pub fn deligne_ok(&self, p: u64) -> Option<bool> {
        let a = self.coefficients.get(&p)?;
        Some(a * a <= BigInt::from(4) * BigInt::from(p).pow(self.weight - 1))
    }

    pub fn ramified(&self) -> BTreeSet<u64> {
        prime_divisors(self.level).into_iter().collect()
    }

    /// Symmetric-square lift at every unramified prime.
    pub fn lift(&self) -> Result<GL3Corpus> {
        let ramified = self.ramified();
        let data = self
            .coefficients
            .iter()
            .filter(|(p, _)| !ramified.contains(p))
            .map(|(&p, a)| sym_square_datum(&normalize_gl2(a, p, self.weight).squared, p))
            .collect::<Result<Vec<_>>>()?;
        GL3Corpus::new(data, Provenance::LiftedFromNewform { weight: self.weight, level: self.level }, ramified)
    }
}

/// `λ_p = a_p·p^{−(k−1)/2}`: `λ_p²` exactly, `λ_p` as a float.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedEigenvalue {
    pub squared: BigRational,
    pub value: f64,
}

pub fn normalize_gl2(a_p: &BigInt, p: u64, weight: u32) -> NormalizedEigenvalue {
    let exponent = weight.saturating_sub(1);
    let squared = BigRational::new(a_p * a_p, BigInt::from(p).pow(exponent));
    let magnitude = rational_to_f64(&squared).sqrt();
    let value = if a_p.is_negative() { -magnitude } else { magnitude };
    NormalizedEigenvalue { squared, value }
}

/// Exact `Sym²` datum: `a_p = λ_p² − 1`, `ω_p = 1`.
pub fn sym_square_datum(lambda_sq: &BigRational, p: u64) -> Result<HeckeLocalDatum> {
    if lambda_sq.is_negative() {
        return Err(Error::InvalidDatum { p, reason: "λ_p² is negative".into() });
    }
    HeckeLocalDatum::exact_real(p, lambda_sq - BigRational::one())
}

/// Floating `Sym²` datum.
pub fn sym_square_datum_f64(lambda_sq: f64, p: u64) -> Result<HeckeLocalDatum> {
    if !(lambda_sq >= 0.0) {
        return Err(Error::InvalidDatum { p, reason: "λ_p² is negative".into() });
    }
    HeckeLocalDatum::new(p, Complex64::new(lambda_sq - 1.0, 0.0), Complex64::new(1.0, 0.0))
}

/// `τ(1), …, τ(n_max)` from `q·∏(1 − qⁿ)^24`, exactly.
///
/// The product is built as `(∏(1 − qⁿ)³)^8`, with the cube expanded by
/// Jacobi's identity `Σ_k (−1)^k (2k+1) q^{k(k+1)/2}`.
pub fn delta_coefficients(n_max: u64) -> Result<Vec<i128>> {
    if n_max > DELTA_MAX {
        return Err(Error::Domain(format!("q-expansion limited to n ≤ {DELTA_MAX} (got {n_max})")));
    }
    let len = n_max as usize; // τ(n) is the coefficient of q^{n−1}
    if len == 0 {
        return Ok(Vec::new());
    }
    let mut cube: Vec<(usize, i128)> = Vec::new();
    for k in 0usize.. {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        cube.push((e, sign * (2 * k as i128 + 1)));
    }
    let mut acc = vec![0i128; len];
    for &(e, c) in &cube {
        acc[e] = c;
    }
    let overflow = || Error::Numeric("q-expansion coefficient overflowed i128".into());
    for _ in 1..8 {
        let mut next = vec![0i128; len];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for &(e, c) in &cube {
                let j = i + e;
                if j >= len {
                    break;
                }
                let term = a.checked_mul(c).ok_or_else(overflow)?;
                next[j] = next[j].checked_add(term).ok_or_else(overflow)?;
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `p ↦ τ(p)` for primes `p ≤ max_prime`.
pub fn delta_qexpansion(max_prime: u64) -> Result<BTreeMap<u64, i128>> {
    let tau = delta_coefficients(max_prime)?;
    Ok(primes_up_to(max_prime)
        .into_iter()
        .map(|p| (p, tau[p as usize - 1]))
        .collect())
}

/// Δ as a level-1, weight-12 newform record.
pub fn delta_newform(max_prime: u64) -> Result<NewformRecord> {
    let coefficients = delta_qexpansion(max_prime)?
        .into_iter()
        .map(|(p, t)| (p, BigInt::from(t)))
        .collect();
    Ok(NewformRecord { weight: 12, level: 1, coefficients })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Provenance {
    LiftedFromNewform { weight: u32, level: u64 },
    Synthetic,
    File,
}

/// A well-formed `gl3` row whose data violate unitarity (`|ω_p| ≠ 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedRow {
    pub p: u64,
    pub line: usize,
    pub row: String,
    pub reason: String,
}

/// One Hecke datum per prime, plus the ramified primes and any rejected
/// rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GL3Corpus {
    data: BTreeMap<u64, HeckeLocalDatum>,
    provenance: Provenance,
    ramified: BTreeSet<u64>,
    rejected: BTreeMap<u64, RejectedRow>,
}

impl GL3Corpus {
    pub fn new(
        data: impl IntoIterator<Item = HeckeLocalDatum>,
        provenance: Provenance,
        ramified: BTreeSet<u64>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, d) in data.into_iter().enumerate() {
            let p = d.p();
            if map.insert(p, d).is_some() {
                return Err(Error::Duplicate { line: i + 1, prime: p });
            }
        }
        Ok(Self { data: map, provenance, ramified, rejected: BTreeMap::new() })
    }

    /// `Sym²Δ` at every prime `p ≤ max_prime`, exact.
    pub fn delta_sym_square(max_prime: u64) -> Result<Self> {
        delta_newform(max_prime)?.lift()
    }

    pub fn data(&self) -> &BTreeMap<u64, HeckeLocalDatum> {
        &self.data
    }

    pub fn get(&self, p: u64) -> Option<&HeckeLocalDatum> {
        self.data.get(&p)
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn ramified(&self) -> &BTreeSet<u64> {
        &self.ramified
    }

    /// Rows that parsed but describe no unitary class.
    pub fn rejected(&self) -> &BTreeMap<u64, RejectedRow> {
        &self.rejected
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.data.values().all(HeckeLocalDatum::is_exact)
    }

    /// Canonical `gl3` text. Exact values are written as fractions and
    /// floats in exponent notation, so reparsing preserves exactness.
    /// Rejected rows are copied verbatim.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# canonical GL(3) corpus: p  Re a_p  Im a_p  Re w_p  Im w_p\nformat=gl3");
        if !self.ramified.is_empty() {
            let list: Vec<String> = self.ramified.iter().map(u64::to_string).collect();
            let _ = write!(out, " ramified={}", list.join(","));
        }
        out.push('\n');
        for (p, d) in &self.data {
            let _ = match d.exact_values() {
                Some(x) => writeln!(
                    out,
                    "{p} {} {} {} {}",
                    x.trace.re, x.trace.im, x.central.re, x.central.im
                ),
                None => writeln!(
                    out,
                    "{p} {:e} {:e} {:e} {:e}",
                    d.trace().re,
                    d.trace().im,
                    d.central().re,
                    d.central().im
                ),
            };
        }
        for r in self.rejected.values() {
            let _ = writeln!(out, "{}", r.row);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Gl3,
    Gl2 { weight: u32, level: u64 },
    Synthetic,
}

struct Header {
    format: Format,
    ramified: BTreeSet<u64>,
}

enum Number {
    Exact(BigRational),
    Float(f64),
}

impl Number {
    fn as_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => rational_to_f64(q),
            Number::Float(x) => *x,
        }
    }
}

fn parse_number(tok: &str, line: usize) -> Result<Number> {
    if let Some(q) = parse_rational(tok) {
        return Ok(Number::Exact(q));
    }
    match tok.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(Number::Float(x)),
        _ => Err(Error::Parse { line, message: format!("not a number: {tok:?}") }),
    }
}

/// Plain float, or `[c][*]pi[/d]`.
fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    let bad = || Error::Parse { line, message: format!("not an angle: {tok:?}") };
    let Some((left, right)) = tok.split_once("pi") else {
        return parse_number(tok, line).map(|n| n.as_f64());
    };
    let left = left.strip_suffix('*').unwrap_or(left);
    let coef = match left {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    let den = match right {
        "" => 1.0,
        s => s.strip_prefix('/').ok_or_else(bad)?.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(coef * std::f64::consts::PI / den)
}

fn parse_prime(tok: &str, line: usize) -> Result<u64> {
    let p: u64 = tok
        .parse()
        .map_err(|_| Error::Parse { line, message: format!("not a prime index: {tok:?}") })?;
    if !is_prime(p) {
        return Err(Error::Validation { line, message: format!("{p} is not prime") });
    }
    Ok(p)
}

fn parse_prime_list(value: &str, line: usize) -> Result<BTreeSet<u64>> {
    value
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|s| parse_prime(s.trim(), line))
        .collect()
}

fn parse_header(text: &str, line: usize) -> Result<Header> {
    let mut kind = None;
    let mut weight = None;
    let mut level = None;
    let mut ramified = BTreeSet::new();
    let bad = |message: String| Error::Parse { line, message };
    for tok in text.split_whitespace() {
        let (key, value) = tok
            .split_once('=')
            .ok_or_else(|| bad(format!("header token {tok:?} is not key=value")))?;
        match key {
            "format" => kind = Some(value.to_string()),
            "weight" => weight = Some(value.parse::<u32>().map_err(|e| bad(format!("weight: {e}")))?),
            "level" => level = Some(value.parse::<u64>().map_err(|e| bad(format!("level: {e}")))?),
            "ramified" => ramified = parse_prime_list(value, line)?,
            _ => return Err(bad(format!("unknown header key {key:?}"))),
        }
    }
    let format = match kind.as_deref() {
        Some("gl3") => Format::Gl3,
        Some("synthetic") => Format::Synthetic,
        Some("gl2") => {
            let weight = weight.ok_or_else(|| bad("gl2 header needs weight=".into()))?;
            if weight == 0 || weight % 2 == 1 {
                return Err(Error::Validation { line, message: format!("weight {weight} must be even and positive") });
            }
            let level = level.unwrap_or(1);
            if level == 0 {
                return Err(Error::Validation { line, message: "level must be positive".into() });
            }
            Format::Gl2 { weight, level }
        }
        Some(other) => return Err(bad(format!("unknown format {other:?}"))),
        None => return Err(bad("header needs format=gl3|gl2|synthetic".into())),
    };
    if let Format::Gl2 { level, .. } = format {
        let from_level: BTreeSet<u64> = prime_divisors(level).into_iter().collect();
        if !ramified.is_empty() && ramified != from_level {
            return Err(Error::Validation { line, message: "ramified= disagrees with the level".into() });
        }
        ramified = from_level;
    }
    Ok(Header { format, ramified })
}

fn invalid_at(line: usize, err: Error) -> Error {
    Error::Validation { line, message: err.to_string() }
}

enum Row {
    Datum(Box<HeckeLocalDatum>),
    Rejected(RejectedRow),
}

fn gl3_row(fields: &[&str], line: usize) -> Result<Row> {
    if fields.len() != 3 && fields.len() != 5 {
        return Err(Error::Parse { line, message: format!("gl3 row needs 3 or 5 fields, got {}", fields.len()) });
    }
    let p = parse_prime(fields[0], line)?;
    let mut nums = fields[1..]
        .iter()
        .map(|t| parse_number(t, line))
        .collect::<Result<Vec<_>>>()?;
    if nums.len() == 2 {
        nums.push(Number::Exact(BigRational::one()));
        nums.push(Number::Exact(BigRational::zero()));
    }
    let exact: Option<Vec<BigRational>> = nums
        .iter()
        .map(|n| match n {
            Number::Exact(q) => Some(q.clone()),
            Number::Float(_) => None,
        })
        .collect();
    let unit_central = match &exact {
        Some(q) => (&q[2] * &q[2] + &q[3] * &q[3]).is_one(),
        None => (Complex64::new(nums[2].as_f64(), nums[3].as_f64()).norm() - 1.0).abs() <= DEFAULT_TOL,
    };
    if !unit_central {
        let reason = "|omega_p| is not 1, so no unitary class has these data".to_string();
        return Ok(Row::Rejected(RejectedRow { p, line, row: fields.join(" "), reason }));
    }
    let datum = match exact {
        Some(q) => HeckeLocalDatum::exact(
            p,
            GaussianRational::new(q[0].clone(), q[1].clone()),
            GaussianRational::new(q[2].clone(), q[3].clone()),
        ),
        None => {
            let f: Vec<f64> = nums.iter().map(Number::as_f64).collect();
            HeckeLocalDatum::new(p, Complex64::new(f[0], f[1]), Complex64::new(f[2], f[3]))
        }
    };
    datum.map(|d| Row::Datum(Box::new(d))).map_err(|e| invalid_at(line, e))
}

fn synthetic_row(fields: &[&str], line: usize) -> Result<HeckeLocalDatum> {
    if fields.len() != 5 {
        return Err(Error::Parse { line, message: format!("synthetic row needs 5 fields, got {}", fields.len()) });
    }
    let p = parse_prime(fields[0], line)?;
    let t = parse_number(fields[1], line)?.as_f64();
    let theta = parse_angle(fields[2], line)?;
    let arg_u = parse_angle(fields[3], line)?;
    let arg_w = parse_angle(fields[4], line)?;
    if !(t >= 0.0) {
        return Err(Error::Validation { line, message: format!("t = {t} must be nonnegative") });
    }
    let shape = NonTemperedShape::from_args(t, arg_u, arg_w);
    let mismatch = Complex64::from_polar(1.0, theta) - Complex64::from_polar(1.0, shape.theta);
    if mismatch.norm() > 1e-9 {
        return Err(Error::Validation { line, message: format!("theta = {theta} disagrees with arg w − arg u") });
    }
    let class = UnitaryClass3::from_shape(p, &shape).map_err(|e| invalid_at(line, e))?;
    HeckeLocalDatum::from_class(&class).map_err(|e| invalid_at(line, e))
}

/// Lines that carry content, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses a `gl2` file into a newform record.
pub fn parse_newform(text: &str) -> Result<NewformRecord> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(Error::Parse { line: 0, message: "empty input".into() })?;
    let header = parse_header(htext, hline)?;
    let Format::Gl2 { weight, level } = header.format else {
        return Err(Error::Parse { line: hline, message: "expected format=gl2".into() });
    };
    let mut coefficients = BTreeMap::new();
    for (line, row) in lines {
        let fields: Vec<&str> = row.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse { line, message: format!("gl2 row needs 2 fields, got {}", fields.len()) });
        }
        let p = parse_prime(fields[0], line)?;
        let a: BigInt = fields[1]
            .parse()
            .map_err(|_| Error::Parse { line, message: format!("a_p must be an integer: {:?}", fields[1]) })?;
        if coefficients.insert(p, a).is_some() {
            return Err(Error::Duplicate { line, prime: p });
        }
    }
    Ok(NewformRecord { weight, level, coefficients })
}

/// Parses any of the three corpus formats.
pub fn parse_corpus(text: &str) -> Result<GL3Corpus> {
    let mut lines = content_lines(text);
    let (hline, htext) = lines.next().ok_or(Error::Parse { line: 0, message: "empty input".into() })?;
    let header = parse_header(htext, hline)?;
    if let Format::Gl2 { .. } = header.format {
        return parse_newform(text)?.lift();
    }
    let mut data = BTreeMap::new();
    let mut rejected = BTreeMap::new();
    for (line, row) in lines {
        let fields: Vec<&str> = row.split_whitespace().collect();
        let row = match header.format {
            Format::Gl3 => gl3_row(&fields, line)?,
            _ => Row::Datum(Box::new(synthetic_row(&fields, line)?)),
        };
        let p = match &row {
            Row::Datum(d) => d.p(),
            Row::Rejected(r) => r.p,
        };
        if data.contains_key(&p) || rejected.contains_key(&p) {
            return Err(Error::Duplicate { line, prime: p });
        }
        match row {
            Row::Datum(d) => {
                data.insert(p, *d);
            }
            Row::Rejected(r) => {
                rejected.insert(p, r);
            }
        }
    }
    let provenance = match header.format {
        Format::Synthetic => Provenance::Synthetic,
        _ => Provenance::File,
    };
    let mut corpus = GL3Corpus::new(data.into_values(), provenance, header.ramified)?;
    corpus.rejected = rejected;
    Ok(corpus)
}

pub fn read_corpus(path: &Path) -> Result<GL3Corpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_corpus(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiset::multiset_eq;
    use crate::satake::{classify, elementary_symmetrics, roots_oracle, Classification, DEFAULT_TOL};
    use std::f64::consts::SQRT_2;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Naive expansion of q∏(1 − qⁿ)^24, one factor at a time.
    fn naive_tau(n_max: usize) -> Vec<i128> {
        let mut c = vec![0i128; n_max];
        c[0] = 1;
        for k in 1..n_max {
            for _ in 0..24 {
                for i in (k..n_max).rev() {
                    c[i] -= c[i - k];
                }
            }
        }
        c
    }

    #[test]
    fn qexpansion_matches_naive_product() {
        let fast = delta_coefficients(200).unwrap();
        assert_eq!(fast, naive_tau(200));
        let tau = delta_qexpansion(5).unwrap();
        assert_eq!(tau[&2], -24);
        assert_eq!(tau[&3], 252);
        assert_eq!(tau[&5], 4830);
        assert!(delta_coefficients(DELTA_MAX + 1).is_err());
    }

    #[test]
    fn tau_is_multiplicative() {
        let t = delta_coefficients(400).unwrap();
        let tau = |n: usize| t[n - 1];
        assert_eq!(tau(6), tau(2) * tau(3));
        assert_eq!(tau(35), tau(5) * tau(7));
        // τ(p²) = τ(p)² − p¹¹
        assert_eq!(tau(49), tau(7) * tau(7) - 7i128.pow(11));
        assert_eq!(tau(361), tau(19) * tau(19) - 19i128.pow(11));
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_gl2(&BigInt::from(-24), 2, 12).squared, q(9, 32));
        assert_eq!(normalize_gl2(&BigInt::from(0), 2, 12).squared, q(0, 1));
        assert_eq!(normalize_gl2(&BigInt::from(0), 2, 12).value, 0.0);
        assert_eq!(normalize_gl2(&BigInt::from(252), 3, 12).squared, q(784, 2187));
        assert!((normalize_gl2(&BigInt::from(-24), 2, 12).value + 24.0 / 2f64.powf(5.5)).abs() < 1e-15);
    }

    #[test]
    fn sym_square_examples() {
        let d = sym_square_datum(&q(9, 32), 2).unwrap();
        assert_eq!(d.exact_values().unwrap().trace, GaussianRational::real(q(-23, 32)));

        let d = sym_square_datum(&q(4, 1), 7).unwrap();
        assert_eq!(d.trace(), Complex64::new(3.0, 0.0));

        let d = sym_square_datum(&q(0, 1), 5).unwrap();
        assert_eq!(d.trace(), Complex64::new(-1.0, 0.0));
        let roots = roots_oracle(&elementary_symmetrics(&d), 5, DEFAULT_TOL).unwrap();
        assert!(roots.alphas().iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));

        assert!(sym_square_datum(&q(-1, 2), 5).is_err());
        assert!(sym_square_datum_f64(-0.5, 5).is_err());
    }

    #[test]
    fn gl2_file_lifts_delta() {
        let text = "# Ramanujan Delta\nformat=gl2 weight=12 level=1\n2 -24\n3 252\n5 4830\n7 -16744\n";
        let corpus = parse_corpus(text).unwrap();
        assert_eq!(corpus.len(), 4);
        assert!(corpus.is_exact());
        assert_eq!(corpus.get(2).unwrap().exact_values().unwrap().trace, GaussianRational::real(q(-23, 32)));
        assert_eq!(corpus.provenance(), &Provenance::LiftedFromNewform { weight: 12, level: 1 });
        let record = parse_newform(text).unwrap();
        assert!(record.coefficients.keys().all(|&p| record.deligne_ok(p) == Some(true)));
    }

    #[test]
    fn gl2_level_marks_ramified_primes() {
        let text = "format=gl2 weight=2 level=11\n2 -2\n3 -1\n5 1\n7 -2\n11 1\n13 4\n";
        let corpus = parse_corpus(text).unwrap();
        assert_eq!(corpus.ramified(), &BTreeSet::from([11]));
        assert!(corpus.get(11).is_none());
        assert_eq!(corpus.len(), 5);
    }

    #[test]
    fn synthetic_row_builds_eq_shape() {
        let corpus = parse_corpus("format=synthetic\n2 0.5 pi 0 pi\n").unwrap();
        let d = corpus.get(2).unwrap();
        let roots = roots_oracle(&elementary_symmetrics(d), 2, DEFAULT_TOL).unwrap();
        let expected = [Complex64::new(SQRT_2, 0.0), Complex64::new(1.0 / SQRT_2, 0.0), Complex64::new(-1.0, 0.0)];
        assert!(multiset_eq(roots.alphas(), &expected, 1e-12));
        assert!(matches!(classify(&roots, DEFAULT_TOL), Classification::NonTempered(_)));
        assert_eq!(corpus.provenance(), &Provenance::Synthetic);
    }

    #[test]
    fn synthetic_angles_must_agree() {
        let err = parse_corpus("format=synthetic\n2 0.5 0 0 pi\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 2, .. }));
        assert!(parse_corpus("format=synthetic\n3 0.25 -pi/2 pi/2 0\n").is_ok());
        assert!(parse_corpus("format=synthetic\n3 0.25 2*pi/3 0 2pi/3\n").is_ok());
    }

    #[test]
    fn gl3_rows_and_exactness() {
        let corpus = parse_corpus("format=gl3 ramified=3\n2 -23/32 0\n5 1/2 0 3/5 4/5\n7 0.25 0.0\n").unwrap();
        assert!(corpus.get(2).unwrap().is_exact());
        assert!(corpus.get(5).unwrap().is_exact());
        assert!(!corpus.get(7).unwrap().is_exact());
        assert!(!corpus.is_exact());
        assert_eq!(corpus.ramified(), &BTreeSet::from([3]));
        assert_eq!(corpus.get(7).unwrap().central(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn non_unit_central_values_are_rejected_not_fatal() {
        let corpus = parse_corpus("format=gl3\n2 1 0 2 0\n3 0 0 0.6 0.8\n5 1 0 0.6 0.7\n").unwrap();
        assert_eq!(corpus.len(), 1);
        assert!(corpus.get(3).is_some());
        let rejected: Vec<(u64, usize)> = corpus.rejected().values().map(|r| (r.p, r.line)).collect();
        assert_eq!(rejected, vec![(2, 2), (5, 4)]);
        let again = parse_corpus(&corpus.to_text()).unwrap();
        assert_eq!(again.to_text(), corpus.to_text());
        assert_eq!(again.rejected().len(), 2);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_corpus("format=gl3\n2 1 0\n4 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 3, .. }), "{err:?}");
        let err = parse_corpus("format=gl3\n2 1 0\n# note\n2 0 0\n").unwrap_err();
        assert_eq!(err, Error::Duplicate { line: 4, prime: 2 });
        let err = parse_corpus("format=gl3\n2 one 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_corpus("format=gl3\n2 1 0 2 0\n2 0 0\n").unwrap_err();
        assert_eq!(err, Error::Duplicate { line: 3, prime: 2 });
        let err = parse_corpus("2 1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_corpus("format=gl2 weight=3\n").unwrap_err();
        assert!(matches!(err, Error::Validation { line: 1, .. }));
        assert!(matches!(parse_corpus("# nothing\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_text_round_trips() {
        let text = "format=synthetic ramified=13\n2 0.5 pi 0 pi\n3 0.1 1 0.5 1.5\n";
        let first = parse_corpus(text).unwrap();
        let again = parse_corpus(&first.to_text()).unwrap();
        assert_eq!(again.data(), first.data());
        assert_eq!(again.ramified(), first.ramified());
        assert_eq!(again.to_text(), first.to_text());

        let exact = GL3Corpus::delta_sym_square(30).unwrap();
        let again = parse_corpus(&exact.to_text()).unwrap();
        assert_eq!(again.data(), exact.data());
        assert!(again.is_exact());
    }
}
