use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use tempered_core::Window;

use crate::commands::parse_complex;
use crate::config::{Builtin, Command, ExactMode, InputSpec, OutputFormat, RunConfig};
use crate::selftest::{DEFAULT_SEED, DEFAULT_TRIALS};

/// Certify Ramanujan primes of GL(3) data, scan adjoint coefficients,
/// evaluate incomplete adjoint L-values and inspect gamma factors.
///
/// Exit codes: 0 success, 1 input or usage error, 2 inconsistent data,
/// 3 selftest failure.
#[derive(Debug, Parser)]
#[command(name = "tempered", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// One certificate per prime of the window outside S.
    Certify {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Positivity scan of the adjoint log-coefficients and witness primes.
    Scan {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Truncated incomplete adjoint L-value at real s > 2.
    Eval {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Adjoint gamma factor for archimedean parameters z1 z2 z3.
    Gamma {
        /// Complex numbers such as `0`, `i`, `-i`, `1/3`, `0.5-2i`.
        #[arg(value_parser = complex_arg, allow_hyphen_values = true)]
        z1: Complex64,
        #[arg(value_parser = complex_arg, allow_hyphen_values = true)]
        z2: Complex64,
        #[arg(value_parser = complex_arg, allow_hyphen_values = true)]
        z3: Complex64,
        #[arg(long, value_parser = complex_arg, allow_hyphen_values = true)]
        s: Complex64,
        /// Parities δ_j ∈ {0, 1}, as `d1,d2,d3`.
        #[arg(long, value_parser = parity_arg, default_value = "0,0,0")]
        parity: [u8; 3],
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Seeded invariant suite on generated data.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Trials per randomized check.
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Corpus file (`format=gl3`, `format=gl2` or `format=synthetic`).
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
    /// Primes p ≤ P and powers m ≤ M.
    #[arg(long, default_value = "1000,5")]
    pub window: Window,
    /// Negativity margin for floating coefficients.
    #[arg(long, default_value_t = 1e-9)]
    pub delta: f64,
    /// Require exact rational data.
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Use floating arithmetic even for rational data.
    #[arg(long)]
    pub float: bool,
    /// Extra primes for S.
    #[arg(long, value_delimiter = ',')]
    pub exclude: Vec<u64>,
    /// Skip the root-oracle fallback when certifying.
    #[arg(long)]
    pub no_oracle: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add wall-clock time to the report (makes it run-dependent).
    #[arg(long)]
    pub timing: bool,
}

fn complex_arg(s: &str) -> Result<Complex64, String> {
    parse_complex(s)
}

fn parity_arg(s: &str) -> Result<[u8; 3], String> {
    let parts: Vec<u8> = s
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|e| format!("parity {t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    <[u8; 3]>::try_from(parts).map_err(|p| format!("need three parities, got {}", p.len()))
}

impl CorpusArgs {
    pub fn to_config(&self, command: Command, output: &OutputArgs) -> RunConfig {
        let input = match (&self.input, self.builtin) {
            (Some(path), _) => Some(InputSpec::Path(path.clone())),
            (None, Some(b)) => Some(InputSpec::Builtin(b)),
            (None, None) => None,
        };
        let exact = match (self.exact, self.float) {
            (true, _) => ExactMode::Exact,
            (_, true) => ExactMode::Float,
            _ => ExactMode::Auto,
        };
        RunConfig {
            command,
            input,
            window: self.window,
            delta: self.delta,
            exact,
            excluded: self.exclude.iter().copied().collect::<BTreeSet<u64>>(),
            format: output.format,
            oracle: !self.no_oracle,
        }
    }
}

impl CliCommand {
    pub fn output(&self) -> &OutputArgs {
        match self {
            CliCommand::Certify { output, .. }
            | CliCommand::Scan { output, .. }
            | CliCommand::Eval { output, .. }
            | CliCommand::Gamma { output, .. }
            | CliCommand::Selftest { output, .. } => output,
        }
    }
}
