use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use tempered_core::{EvalResult, PositivityReport, Provenance, Reason, Verdict, Window, Witness, WitnessSummary};

use crate::config::{Command, RunConfig};
use crate::error::{EXIT_INCONSISTENT, EXIT_OK, EXIT_SELFTEST};

/// One structured document per run. Sections absent for a command are
/// omitted; numbers are the same in the human rendering.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Command,
    #[serde(skip_serializing_if = "RunConfig::corpus_free")]
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<CorpusInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certify: Option<CertifySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<GammaSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selftest: Option<SelftestSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusInfo {
    pub provenance: Provenance,
    pub primes: usize,
    pub exact: bool,
    pub ramified: Vec<u64>,
    pub rejected: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowVerdict {
    RamanujanCertified,
    NonTemperedCertified,
    Undetermined,
    Inconsistent,
}

impl From<Verdict> for RowVerdict {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::RamanujanCertified => RowVerdict::RamanujanCertified,
            Verdict::NonTemperedCertified => RowVerdict::NonTemperedCertified,
            Verdict::Undetermined => RowVerdict::Undetermined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRow {
    pub p: u64,
    pub verdict: RowVerdict,
    pub reason: Option<Reason>,
    pub witness: Option<Witness>,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertifySummary {
    pub scanned: usize,
    pub ramanujan: usize,
    pub non_tempered: usize,
    pub undetermined: usize,
    pub inconsistent: usize,
    /// Empirical fraction of scanned primes certified Ramanujan.
    pub ramanujan_density: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertifySection {
    pub window: Window,
    pub excluded: Vec<u64>,
    pub certificates: Vec<CertificateRow>,
    pub summary: CertifySummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanSection {
    pub window: Window,
    pub excluded: Vec<u64>,
    pub positivity: PositivityReport,
    pub witnesses: WitnessSummary,
}

/// `max_p |L(s, π_p × π̄_p) − ζ_p(s)·L(s, π_p; Ad)| / |L(s, π_p × π̄_p)|`.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationCheck {
    pub primes: usize,
    pub max_relative_residual: f64,
    pub worst_prime: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalSection {
    pub window: Window,
    pub excluded: Vec<u64>,
    pub result: EvalResult,
    pub factorization: FactorizationCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum GammaValue {
    Finite { value: Complex64 },
    Pole { order: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaSection {
    pub z: [Complex64; 3],
    pub parity: [u8; 3],
    pub s: Complex64,
    pub b: [Complex64; 8],
    pub adjoint_factor: GammaValue,
    pub pole_order_at_zero: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureRecord {
    pub trial: usize,
    /// Rerun with `selftest --seed <seed> --trials 1` to reproduce.
    pub seed: u64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub trials: usize,
    pub passed: bool,
    pub failures: Vec<FailureRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestSection {
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            command: config.command,
            config: config.clone(),
            corpus: None,
            certify: None,
            scan: None,
            eval: None,
            gamma: None,
            selftest: None,
            timing_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.selftest.as_ref().is_some_and(|s| !s.passed) {
            return EXIT_SELFTEST;
        }
        if self.certify.as_ref().is_some_and(|c| c.summary.inconsistent > 0) {
            return EXIT_INCONSISTENT;
        }
        EXIT_OK
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let c = &self.config;
        let _ = writeln!(out, "command: {}", kebab(&self.command));
        if let Some(input) = &c.input {
            let _ = writeln!(out, "input: {}", json_inline(input));
        }
        if !c.corpus_free() {
            let _ = writeln!(
                out,
                "window: P = {}, M = {}  delta: {}  exact: {}  oracle: {}",
                c.window.max_prime,
                c.window.max_power,
                num(c.delta),
                kebab(&c.exact),
                c.oracle
            );
        }
        if let Some(info) = &self.corpus {
            let _ = writeln!(
                out,
                "corpus: {} primes, provenance {}, exact {}, ramified {}, rejected {}",
                info.primes,
                json_inline(&info.provenance),
                info.exact,
                list(&info.ramified),
                list(&info.rejected)
            );
        }
        if let Some(sec) = &self.certify {
            render_certify(&mut out, sec);
        }
        if let Some(sec) = &self.scan {
            render_scan(&mut out, sec);
        }
        if let Some(sec) = &self.eval {
            render_eval(&mut out, sec);
        }
        if let Some(sec) = &self.gamma {
            render_gamma(&mut out, sec);
        }
        if let Some(sec) = &self.selftest {
            render_selftest(&mut out, sec);
        }
        if let Some(ms) = self.timing_ms {
            let _ = writeln!(out, "time: {} ms", num(ms));
        }
        out
    }
}

fn render_certify(out: &mut String, sec: &CertifySection) {
    let _ = writeln!(out, "excluded: {}", list(&sec.excluded));
    for row in &sec.certificates {
        let _ = write!(out, "p = {:>5}  {:<24}", row.p, kebab(&row.verdict));
        if let Some(reason) = &row.reason {
            let _ = write!(out, "  {}", kebab(reason));
        }
        if let Some(w) = &row.witness {
            let _ = write!(out, "  {}", witness_text(w));
        }
        let _ = write!(out, "  exact: {}", row.exact);
        if let Some(detail) = &row.detail {
            let _ = write!(out, "  ({detail})");
        }
        out.push('\n');
    }
    let s = &sec.summary;
    let _ = writeln!(
        out,
        "summary: {} scanned, {} ramanujan, {} non-tempered, {} undetermined, {} inconsistent, ramanujan density {}",
        s.scanned,
        s.ramanujan,
        s.non_tempered,
        s.undetermined,
        s.inconsistent,
        num(s.ramanujan_density)
    );
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::TraceNormSquared { value, exact } => {
            format!("|a_p|^2 = {}{}", num(*value), exact_suffix(exact))
        }
        Witness::PowerIndex { m, coefficient, exact } => {
            format!("a(p^{m}; Ad) = {}{}", num(*coefficient), exact_suffix(exact))
        }
        Witness::RootModulus { modulus } => format!("max |alpha| = {}", num(*modulus)),
    }
}

fn exact_suffix(exact: &Option<String>) -> String {
    exact.as_ref().map(|q| format!(" = {q}")).unwrap_or_default()
}

fn render_scan(out: &mut String, sec: &ScanSection) {
    let _ = writeln!(out, "excluded: {}", list(&sec.excluded));
    let pos = &sec.positivity;
    let _ = writeln!(
        out,
        "positive type over window: {}  ({} coefficients scanned, {} negative)",
        pos.is_positive_type, pos.scanned, pos.negative_count
    );
    match &pos.first_negative {
        Some(e) => {
            let _ = writeln!(out, "first negative: p = {}, m = {}, value {}{}", e.p, e.m, num(e.value), exact_suffix(&e.exact));
        }
        None => out.push_str("first negative: none\n"),
    }
    let w = &sec.witnesses;
    let _ = writeln!(
        out,
        "witness primes: {} of {} scanned, density {}",
        w.witness_count,
        w.scanned,
        num(w.density)
    );
    for pw in &w.witnesses {
        let _ = writeln!(out, "  p = {:>5}  m = {}  value {}{}", pw.p, pw.m, num(pw.value), exact_suffix(&pw.exact));
    }
}

fn render_eval(out: &mut String, sec: &EvalSection) {
    let r = &sec.result;
    let _ = writeln!(out, "excluded: {}", list(&sec.excluded));
    let _ = writeln!(out, "s = {}", num(r.s));
    let _ = writeln!(out, "L^S(s, Ad) truncated: {}", num(r.value));
    let _ = writeln!(out, "log value: {}", num(r.log_value));
    let _ = writeln!(out, "tail bound on log: {}", num(r.tail_bound));
    let f = &sec.factorization;
    let worst = f.worst_prime.map(|p| format!(" at p = {p}")).unwrap_or_default();
    let _ = writeln!(
        out,
        "factorization residual over {} primes: {}{}",
        f.primes,
        num(f.max_relative_residual),
        worst
    );
}

fn render_gamma(out: &mut String, sec: &GammaSection) {
    let z: Vec<String> = sec.z.iter().map(|&x| complex(x)).collect();
    let _ = writeln!(out, "z = [{}]  parity = {:?}", z.join(", "), sec.parity);
    let b: Vec<String> = sec.b.iter().map(|&x| complex(x)).collect();
    let _ = writeln!(out, "B = [{}]", b.join(", "));
    match sec.adjoint_factor {
        GammaValue::Finite { value } => {
            let _ = writeln!(out, "adjoint gamma factor at s = {}: {}", complex(sec.s), complex(value));
        }
        GammaValue::Pole { order } => {
            let _ = writeln!(out, "adjoint gamma factor at s = {}: pole, order {order}", complex(sec.s));
        }
    }
    let _ = writeln!(out, "pole order at s = 0: {}", sec.pole_order_at_zero);
}

fn render_selftest(out: &mut String, sec: &SelftestSection) {
    let _ = writeln!(out, "seed: {}  trials per check: {}", sec.seed, sec.trials);
    for check in &sec.checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {}  ({} trials, {} failures)", check.name, check.trials, check.failures.len());
        for f in &check.failures {
            let _ = writeln!(out, "      trial {} seed {}: {}", f.trial, f.seed, f.detail);
        }
    }
    let _ = writeln!(out, "selftest: {}", if sec.passed { "passed" } else { "FAILED" });
}

/// Numbers print exactly as in the JSON report.
pub fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("floats serialize")
}

/// `(re, im)`, the pair the JSON report holds.
fn complex(z: Complex64) -> String {
    format!("({}, {})", num(z.re), num(z.im))
}

fn list(ps: &[u64]) -> String {
    if ps.is_empty() {
        return "none".into();
    }
    ps.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn kebab<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn json_inline<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}
