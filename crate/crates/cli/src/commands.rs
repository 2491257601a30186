use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use tempered_core::primes::primes_up_to;
use tempered_core::series::build_from_corpus;
use tempered_core::{
    adjoint_gamma_factor, arch_adjoint_set, certify_prime, elementary_symmetrics, evaluate_incomplete,
    local_factor_adjoint, local_factor_rankin, local_zeta, pole_order_at_zero, positive_type_scan, roots_oracle,
    witness_report, ArchParams, Error, GL3Corpus, DEFAULT_TOL,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{
    CertificateRow, CertifySection, CertifySummary, CorpusInfo, EvalSection, FactorizationCheck, GammaSection,
    GammaValue, Report, RowVerdict, ScanSection,
};

fn corpus_info(corpus: &GL3Corpus) -> CorpusInfo {
    CorpusInfo {
        provenance: corpus.provenance().clone(),
        primes: corpus.len(),
        exact: corpus.is_exact(),
        ramified: corpus.ramified().iter().copied().collect(),
        rejected: corpus.rejected().keys().copied().collect(),
    }
}

/// Primes of the window outside `S`, failing on primes without data.
fn window_primes(config: &RunConfig, corpus: &GL3Corpus, excluded: &BTreeSet<u64>) -> Result<Vec<u64>, CliError> {
    let primes: Vec<u64> = primes_up_to(config.window.max_prime)
        .into_iter()
        .filter(|p| !excluded.contains(p))
        .collect();
    let missing: Vec<String> = primes
        .iter()
        .filter(|p| corpus.get(**p).is_none() && !corpus.rejected().contains_key(p))
        .map(u64::to_string)
        .collect();
    if !missing.is_empty() {
        return Err(CliError::Usage(format!(
            "no data for primes {} in window {} (exclude them or shrink the window)",
            missing.join(", "),
            config.window
        )));
    }
    Ok(primes)
}

/// Rejected rows inside the window stop analyses that need every datum.
fn require_consistent(corpus: &GL3Corpus, primes: &[u64]) -> Result<(), CliError> {
    let bad: Vec<String> = primes
        .iter()
        .filter_map(|p| corpus.rejected().get(p))
        .map(|r| format!("p = {} (line {}): {}", r.p, r.line, r.reason))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Inconsistent(bad.join("; ")))
    }
}

pub fn cmd_certify(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let corpus = config.load_corpus()?;
    certify_corpus(config, &corpus)
}

/// One certificate per prime of the window outside `S`, sorted by prime.
pub fn certify_corpus(config: &RunConfig, corpus: &GL3Corpus) -> Result<Report, CliError> {
    let excluded = config.excluded_with(corpus);
    let primes = window_primes(config, corpus, &excluded)?;
    let params = config.certify_params();
    let mut rows: Vec<CertificateRow> = primes
        .par_iter()
        .map(|&p| {
            if let Some(r) = corpus.rejected().get(&p) {
                return inconsistent_row(p, format!("line {}: {}", r.line, r.reason));
            }
            let d = corpus.get(p).expect("window_primes checked coverage");
            match certify_prime(d, &params) {
                Ok(cert) => CertificateRow {
                    p,
                    verdict: cert.verdict.into(),
                    reason: cert.reason,
                    witness: cert.witness,
                    exact: cert.exact,
                    detail: None,
                },
                Err(e @ Error::InvalidDatum { .. }) => inconsistent_row(p, e.to_string()),
                Err(e) => CertificateRow {
                    p,
                    verdict: RowVerdict::Undetermined,
                    reason: None,
                    witness: None,
                    exact: false,
                    detail: Some(e.to_string()),
                },
            }
        })
        .collect();
    rows.sort_by_key(|r| r.p);

    let count = |v: RowVerdict| rows.iter().filter(|r| r.verdict == v).count();
    let scanned = rows.len();
    let ramanujan = count(RowVerdict::RamanujanCertified);
    let summary = CertifySummary {
        scanned,
        ramanujan,
        non_tempered: count(RowVerdict::NonTemperedCertified),
        undetermined: count(RowVerdict::Undetermined),
        inconsistent: count(RowVerdict::Inconsistent),
        ramanujan_density: if scanned == 0 { 0.0 } else { ramanujan as f64 / scanned as f64 },
    };
    let mut report = Report::new(config);
    report.corpus = Some(corpus_info(corpus));
    report.certify = Some(CertifySection {
        window: config.window,
        excluded: excluded.into_iter().collect(),
        certificates: rows,
        summary,
    });
    Ok(report)
}

fn inconsistent_row(p: u64, detail: String) -> CertificateRow {
    CertificateRow { p, verdict: RowVerdict::Inconsistent, reason: None, witness: None, exact: false, detail: Some(detail) }
}

pub fn cmd_scan(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let corpus = config.load_corpus()?;
    scan_corpus(config, &corpus)
}

pub fn scan_corpus(config: &RunConfig, corpus: &GL3Corpus) -> Result<Report, CliError> {
    let excluded = config.excluded_with(corpus);
    let primes = window_primes(config, corpus, &excluded)?;
    require_consistent(corpus, &primes)?;
    let series = build_from_corpus(corpus, &config.excluded, config.window, config.use_exact())?;
    let mut report = Report::new(config);
    report.corpus = Some(corpus_info(corpus));
    report.scan = Some(ScanSection {
        window: config.window,
        excluded: excluded.into_iter().collect(),
        positivity: positive_type_scan(&series, config.delta),
        witnesses: witness_report(&series, config.delta),
    });
    Ok(report)
}

pub fn cmd_eval(config: &RunConfig, s: f64) -> Result<Report, CliError> {
    config.validate()?;
    if !(s > 2.0) {
        return Err(CliError::Usage(format!("eval needs s > 2, where the product converges absolutely (got {s})")));
    }
    let corpus = config.load_corpus()?;
    eval_corpus(config, &corpus, s)
}

pub fn eval_corpus(config: &RunConfig, corpus: &GL3Corpus, s: f64) -> Result<Report, CliError> {
    let excluded = config.excluded_with(corpus);
    let primes = window_primes(config, corpus, &excluded)?;
    require_consistent(corpus, &primes)?;
    let series = build_from_corpus(corpus, &config.excluded, config.window, config.use_exact())?;
    let result = evaluate_incomplete(&series, s)?;

    let point = Complex64::new(s, 0.0);
    let residuals: Vec<(u64, f64)> = primes
        .par_iter()
        .map(|&p| {
            let d = corpus.get(p).expect("window_primes checked coverage");
            let class = roots_oracle(&elementary_symmetrics(d), p, DEFAULT_TOL)?;
            let rankin = local_factor_rankin(&class, point)?;
            let product = local_zeta(p, point) * local_factor_adjoint(&class, point)?;
            Ok((p, (rankin - product).norm() / rankin.norm()))
        })
        .collect::<Result<_, Error>>()?;
    let worst = residuals.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)));

    let mut report = Report::new(config);
    report.corpus = Some(corpus_info(corpus));
    report.eval = Some(EvalSection {
        window: config.window,
        excluded: excluded.into_iter().collect(),
        result,
        factorization: FactorizationCheck {
            primes: residuals.len(),
            max_relative_residual: worst.map_or(0.0, |w| w.1),
            worst_prime: worst.map(|w| w.0),
        },
    });
    Ok(report)
}

pub fn cmd_gamma(config: &RunConfig, z: [Complex64; 3], parity: [u8; 3], s: Complex64) -> Result<Report, CliError> {
    let params = ArchParams::new(z, parity).map_err(|e| CliError::Usage(e.to_string()))?;
    let adjoint_factor = match adjoint_gamma_factor(&params, s) {
        Ok(value) => GammaValue::Finite { value },
        Err(Error::Pole { order }) => GammaValue::Pole { order },
        Err(e) => return Err(e.into()),
    };
    let mut report = Report::new(config);
    report.gamma = Some(GammaSection {
        z,
        parity,
        s,
        b: arch_adjoint_set(&params).b,
        adjoint_factor,
        pole_order_at_zero: pole_order_at_zero(&params),
    });
    Ok(report)
}

/// Parses `a`, `b i`, `a+bi`, `a-bi`, with `a`, `b` decimals or fractions
/// `n/d`; `i` and `-i` alone are accepted.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err("empty complex number".into());
    }
    let Some(body) = t.strip_suffix('i') else {
        return parse_real(&t).map(|re| Complex64::new(re, 0.0));
    };
    // The split point is the last sign that does not open an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other.strip_suffix('*').unwrap_or(other))?,
    };
    Ok(Complex64::new(re, im))
}

fn parse_real(t: &str) -> Result<f64, String> {
    if let Some((n, d)) = t.split_once('/') {
        let n: f64 = n.parse().map_err(|_| format!("bad numerator in {t:?}"))?;
        let d: f64 = d.parse().map_err(|_| format!("bad denominator in {t:?}"))?;
        if d == 0.0 {
            return Err(format!("zero denominator in {t:?}"));
        }
        return Ok(n / d);
    }
    t.parse().map_err(|_| format!("not a number: {t:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let c = Complex64::new;
        assert_eq!(parse_complex("i"), Ok(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Ok(c(0.0, -1.0)));
        assert_eq!(parse_complex("0"), Ok(c(0.0, 0.0)));
        assert_eq!(parse_complex("1/3"), Ok(c(1.0 / 3.0, 0.0)));
        assert_eq!(parse_complex("1/3+0i"), Ok(c(1.0 / 3.0, 0.0)));
        assert_eq!(parse_complex("0.5-2i"), Ok(c(0.5, -2.0)));
        assert_eq!(parse_complex("-1e-3+2.5e2i"), Ok(c(-1e-3, 250.0)));
        assert_eq!(parse_complex("2 i"), Ok(c(0.0, 2.0)));
        assert!(parse_complex("x").is_err());
        assert!(parse_complex("1/0").is_err());
    }
}
