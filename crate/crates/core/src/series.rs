//! Truncated log-Dirichlet series of incomplete adjoint Euler products.
//!
//! `log L^S(s, π; Ad) = Σ_{p∉S} Σ_{m≥1} a_{p^m}(Ad) / (m·p^{ms})`. Entries
//! store `a_{p^m}(Ad)` itself; the `1/m` weight only enters evaluation, so
//! the sign pattern (positive type or not) is read directly off the entries.
//! Every claim made from a series is relative to its window `(P_max, M_max)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adjoint::{adjoint_coefficients, adjoint_coefficients_exact};
use crate::error::{Error, Result};
use crate::gaussian::rational_to_f64;
use crate::ingest::GL3Corpus;
use crate::primes::primes_up_to;
use crate::satake::HeckeLocalDatum;

/// Truncation window: primes `p ≤ max_prime`, powers `m ≤ max_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub max_prime: u64,
    pub max_power: usize,
}

impl Window {
    pub fn new(max_prime: u64, max_power: usize) -> Self {
        Self { max_prime, max_power }
    }
}

impl Default for Window {
    fn default() -> Self {
        Self { max_prime: 1000, max_power: 5 }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.max_prime, self.max_power)
    }
}

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (p, m) = s
            .split_once(',')
            .ok_or_else(|| format!("window must be P,M (got {s:?})"))?;
        let max_prime: u64 = p.trim().parse().map_err(|e| format!("window prime bound: {e}"))?;
        let max_power: usize = m.trim().parse().map_err(|e| format!("window power bound: {e}"))?;
        if max_prime == 0 || max_power == 0 {
            return Err("window bounds must be positive".into());
        }
        Ok(Self { max_prime, max_power })
    }
}

/// One coefficient `a_{p^m}(Ad)`, exact when the source datum was.
#[derive(Debug, Clone, PartialEq)]
pub struct Coefficient {
    pub value: f64,
    pub exact: Option<BigRational>,
}

impl Coefficient {
    /// Strictly negative: exactly below 0, or below `−margin` in floating mode.
    pub fn is_negative(&self, margin: f64) -> bool {
        match &self.exact {
            Some(q) => q.is_negative(),
            None => self.value < -margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogDirichletSeries {
    entries: BTreeMap<(u64, usize), Coefficient>,
    excluded: BTreeSet<u64>,
    window: Window,
    /// Per-prime bound ρ_p with `|a_{p^m}(Ad)| ≤ 9ρ_p^m`.
    growth: BTreeMap<u64, f64>,
}

impl LogDirichletSeries {
    pub fn window(&self) -> Window {
        self.window
    }

    pub fn excluded(&self) -> &BTreeSet<u64> {
        &self.excluded
    }

    pub fn get(&self, p: u64, m: usize) -> Option<&Coefficient> {
        self.entries.get(&(p, m))
    }

    /// Entries in increasing `(p, m)`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, usize, &Coefficient)> {
        self.entries.iter().map(|(&(p, m), c)| (p, m, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Primes carrying entries, ascending.
    pub fn primes(&self) -> Vec<u64> {
        self.growth.keys().copied().collect()
    }

    /// Rebuilds a series from raw entries, in any order. Used to check that
    /// nothing downstream depends on insertion order.
    pub fn from_entries(
        entries: impl IntoIterator<Item = (u64, usize, Coefficient)>,
        excluded: BTreeSet<u64>,
        window: Window,
        growth: BTreeMap<u64, f64>,
    ) -> Self {
        let entries = entries.into_iter().map(|(p, m, c)| ((p, m), c)).collect();
        Self { entries, excluded, window, growth }
    }

    pub fn growth(&self) -> &BTreeMap<u64, f64> {
        &self.growth
    }
}

/// Builds `log L^S(s, π; Ad)` over `window` from per-prime Hecke data.
///
/// Every prime `p ≤ max_prime` outside `excluded` needs a datum; data for
/// larger primes are ignored. With `exact`, exact data produce exact
/// coefficients.
pub fn build_adjoint_log_series(
    data: &[HeckeLocalDatum],
    excluded: &BTreeSet<u64>,
    window: Window,
    exact: bool,
) -> Result<LogDirichletSeries> {
    let mut by_prime: HashMap<u64, &HeckeLocalDatum> = HashMap::new();
    for d in data {
        by_prime.entry(d.p()).or_insert(d);
    }
    let primes: Vec<u64> = primes_up_to(window.max_prime)
        .into_iter()
        .filter(|p| !excluded.contains(p))
        .collect();
    let mut rows: Vec<(u64, Vec<Coefficient>, f64)> = primes
        .par_iter()
        .map(|&p| {
            let d = by_prime.get(&p).ok_or(Error::IncompleteData { prime: p })?;
            let floats = adjoint_coefficients(d, window.max_power);
            let exacts = if exact { adjoint_coefficients_exact(d, window.max_power) } else { None };
            let coeffs = match exacts {
                Some(qs) => qs
                    .into_iter()
                    .map(|q| Coefficient { value: rational_to_f64(&q), exact: Some(q) })
                    .collect(),
                None => floats.into_iter().map(|value| Coefficient { value, exact: None }).collect(),
            };
            // p^t < |a_p| + 1 for a non-tempered class; t < 1/2 caps p^{2t} at p.
            let growth = (d.trace().norm() + 1.0).powi(2).min(p as f64);
            Ok((p, coeffs, growth))
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|(p, _, _)| *p);

    let mut entries = BTreeMap::new();
    let mut growth = BTreeMap::new();
    for (p, coeffs, rho) in rows {
        for (i, c) in coeffs.into_iter().enumerate() {
            entries.insert((p, i + 1), c);
        }
        growth.insert(p, rho);
    }
    Ok(LogDirichletSeries { entries, excluded: excluded.clone(), window, growth })
}

/// Same as [`build_adjoint_log_series`], with the corpus' ramified primes
/// added to the excluded set.
pub fn build_from_corpus(
    corpus: &GL3Corpus,
    excluded: &BTreeSet<u64>,
    window: Window,
    exact: bool,
) -> Result<LogDirichletSeries> {
    let mut all = excluded.clone();
    all.extend(corpus.ramified().iter().copied());
    let data: Vec<HeckeLocalDatum> = corpus.data().values().cloned().collect();
    build_adjoint_log_series(&data, &all, window, exact)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NegativeEntry {
    pub p: u64,
    pub m: usize,
    pub value: f64,
    pub exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub is_positive_type: bool,
    pub first_negative: Option<NegativeEntry>,
    pub negative_count: usize,
    pub scanned: usize,
}

fn negative_entry(p: u64, m: usize, c: &Coefficient) -> NegativeEntry {
    NegativeEntry { p, m, value: c.value, exact: c.exact.as_ref().map(|q| q.to_string()) }
}

/// Scans entries in increasing `(p, m)` for strictly negative coefficients.
pub fn positive_type_scan(series: &LogDirichletSeries, margin: f64) -> PositivityReport {
    let mut first_negative = None;
    let mut negative_count = 0;
    for (p, m, c) in series.iter() {
        if c.is_negative(margin) {
            negative_count += 1;
            if first_negative.is_none() {
                first_negative = Some(negative_entry(p, m, c));
            }
        }
    }
    PositivityReport {
        is_positive_type: first_negative.is_none(),
        first_negative,
        negative_count,
        scanned: series.len(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub s: f64,
    pub value: f64,
    /// The truncated sum `Σ a_{p^m}(Ad)/(m·p^{ms})`.
    pub log_value: f64,
    /// Bound on `|log L^S(s) − log_value|` from primes beyond the window
    /// and powers beyond `M_max`.
    pub tail_bound: f64,
}

/// `exp` of the truncated log series at real `s > 2`, with a tail bound.
///
/// Beyond the window, coefficients are bounded by `9p^m` (exponents
/// `t < 1/2`), giving `9·Σ_{n>P} Σ_m n^{-m(s−1)} ≤ 18·Σ_{n>P} n^{1−s}`,
/// estimated by an integral. Inside the window, powers above `M_max` use the
/// per-prime growth bound.
pub fn evaluate_incomplete(series: &LogDirichletSeries, s: f64) -> Result<EvalResult> {
    if !(s > 2.0) {
        return Err(Error::Domain(format!("evaluation needs s > 2 (got {s})")));
    }
    let log_value: f64 = series
        .iter()
        .fold(0.0, |acc, (p, m, c)| acc + c.value / m as f64 * (p as f64).powf(-(m as f64) * s));

    let start = (series.window.max_prime + 1).max(2) as f64;
    let beyond = 18.0 * (start.powf(1.0 - s) + start.powf(2.0 - s) / (s - 2.0));

    let depth = series.window.max_power;
    let mut truncation = 0.0;
    for (&p, &rho) in &series.growth {
        let r = rho * (p as f64).powf(-s);
        if !(r < 1.0) {
            return Err(Error::Domain(format!("series at p = {p} does not converge at s = {s}")));
        }
        truncation += 9.0 / (depth + 1) as f64 * r.powi(depth as i32 + 1) / (1.0 - r);
    }

    Ok(EvalResult { s, value: log_value.exp(), log_value, tail_bound: beyond + truncation })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeWitness {
    pub p: u64,
    pub m: usize,
    pub value: f64,
    pub exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    pub window: Window,
    pub excluded: Vec<u64>,
    pub witnesses: Vec<PrimeWitness>,
    pub scanned: usize,
    pub witness_count: usize,
    /// Empirical fraction of scanned primes that are witnesses.
    pub density: f64,
}

/// Primes with a negative adjoint coefficient at some `m ≤ M_max`; each is
/// a certified Ramanujan prime.
pub fn witness_report(series: &LogDirichletSeries, margin: f64) -> WitnessSummary {
    let mut witnesses: Vec<PrimeWitness> = Vec::new();
    for (p, m, c) in series.iter() {
        if witnesses.last().is_some_and(|w| w.p == p) {
            continue;
        }
        if c.is_negative(margin) {
            let e = negative_entry(p, m, c);
            witnesses.push(PrimeWitness { p: e.p, m: e.m, value: e.value, exact: e.exact });
        }
    }
    let scanned = series.growth.len();
    let witness_count = witnesses.len();
    let density = if scanned == 0 { 0.0 } else { witness_count as f64 / scanned as f64 };
    WitnessSummary {
        window: series.window,
        excluded: series.excluded.iter().copied().collect(),
        witnesses,
        scanned,
        witness_count,
        density,
    }
}
