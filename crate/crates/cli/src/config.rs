use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use tempered_core::ingest::DELTA_MAX;
use tempered_core::{read_corpus, CertifyParams, GL3Corpus, Window, DEFAULT_TOL};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Certify,
    Scan,
    Eval,
    Gamma,
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Human,
    Json,
}

/// Corpora that ship with the tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Builtin {
    /// Symmetric square of Δ, lifted from its q-expansion.
    #[value(name = "delta-sym2")]
    DeltaSym2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputSpec {
    Path(PathBuf),
    Builtin(Builtin),
}

/// `Auto` is exact exactly when the data are rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactMode {
    #[default]
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub input: Option<InputSpec>,
    pub window: Window,
    /// Negativity margin for floating coefficients.
    pub delta: f64,
    pub exact: ExactMode,
    pub excluded: BTreeSet<u64>,
    pub format: OutputFormat,
    pub oracle: bool,
}

impl RunConfig {
    /// Gamma and selftest runs read no corpus, so window settings do not apply.
    pub fn corpus_free(&self) -> bool {
        matches!(self.command, Command::Gamma | Command::Selftest)
    }

    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: None,
            window: Window::default(),
            delta: 1e-9,
            exact: ExactMode::Auto,
            excluded: BTreeSet::new(),
            format: OutputFormat::Human,
            oracle: true,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.window.max_prime == 0 || self.window.max_power == 0 {
            return Err(CliError::Usage(format!("window {} must be positive", self.window)));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(CliError::Usage(format!("--delta must be a finite nonnegative number (got {})", self.delta)));
        }
        Ok(())
    }

    pub fn certify_params(&self) -> CertifyParams {
        CertifyParams {
            depth: self.window.max_power,
            margin: self.delta,
            tol: DEFAULT_TOL,
            oracle: self.oracle,
            exact: self.exact != ExactMode::Float,
        }
    }

    pub fn use_exact(&self) -> bool {
        self.exact != ExactMode::Float
    }

    /// Reads the configured corpus and enforces `--exact`.
    pub fn load_corpus(&self) -> Result<GL3Corpus, CliError> {
        let corpus = match &self.input {
            None => return Err(CliError::Usage("an input is required: --input PATH or --builtin delta-sym2".into())),
            Some(InputSpec::Path(path)) => read_corpus(path)?,
            Some(InputSpec::Builtin(Builtin::DeltaSym2)) => {
                if self.window.max_prime > DELTA_MAX {
                    return Err(CliError::Usage(format!(
                        "the built-in Δ corpus stops at p = {DELTA_MAX} (window asks for {})",
                        self.window.max_prime
                    )));
                }
                GL3Corpus::delta_sym_square(self.window.max_prime)?
            }
        };
        if self.exact == ExactMode::Exact {
            let inexact: Vec<String> = corpus
                .data()
                .values()
                .filter(|d| d.p() <= self.window.max_prime && !d.is_exact())
                .map(|d| d.p().to_string())
                .collect();
            if !inexact.is_empty() {
                return Err(CliError::Usage(format!(
                    "--exact needs rational data; floating values at p = {}",
                    inexact.join(", ")
                )));
            }
        }
        Ok(corpus)
    }

    /// `S`: the excluded primes plus the corpus' ramified primes.
    pub fn excluded_with(&self, corpus: &GL3Corpus) -> BTreeSet<u64> {
        self.excluded.union(corpus.ramified()).copied().collect()
    }
}
