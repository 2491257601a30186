//! Command-line front end: batch certification, positivity scans,
//! incomplete adjoint L-values, gamma factors and a seeded selftest.
//!
//! Every command produces a [`Report`]; reports are sorted by prime and
//! contain no run-dependent data unless `--timing` is given, so the same
//! configuration always yields the same bytes.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod selftest;

use std::ffi::OsString;
use std::time::Instant;

use clap::Parser;

pub use args::{Cli, CliCommand};
pub use commands::{cmd_certify, cmd_eval, cmd_gamma, cmd_scan, parse_complex};
pub use config::{Builtin, Command, ExactMode, InputSpec, OutputFormat, RunConfig};
pub use error::{CliError, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK, EXIT_SELFTEST};
pub use report::Report;
pub use selftest::{run_selftest, SelftestOptions};

pub fn cmd_selftest(config: &RunConfig, opts: &SelftestOptions) -> Report {
    let mut report = Report::new(config);
    report.selftest = Some(run_selftest(opts));
    report
}

/// Runs the parsed command and returns its report.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let output = cli.command.output();
    let mut report = match &cli.command {
        CliCommand::Certify { corpus, output } => cmd_certify(&corpus.to_config(Command::Certify, output))?,
        CliCommand::Scan { corpus, output } => cmd_scan(&corpus.to_config(Command::Scan, output))?,
        CliCommand::Eval { corpus, s, output } => cmd_eval(&corpus.to_config(Command::Eval, output), *s)?,
        CliCommand::Gamma { z1, z2, z3, s, parity, output } => {
            let mut config = RunConfig::new(Command::Gamma);
            config.format = output.format;
            cmd_gamma(&config, [*z1, *z2, *z3], *parity, *s)?
        }
        CliCommand::Selftest { seed, trials, inject_fault, output } => {
            let mut config = RunConfig::new(Command::Selftest);
            config.format = output.format;
            cmd_selftest(&config, &SelftestOptions { seed: *seed, trials: *trials, inject_fault: *inject_fault })
        }
    };
    if output.timing {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(report)
}

/// Parses `args`, runs the command, writes the report, and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let report = match execute(&cli) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let output = cli.command.output();
    let text = match output.format {
        OutputFormat::Human => report.to_human(),
        OutputFormat::Json => report.to_json(),
    };
    let written = match &output.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {}", CliError::Output(e));
        return EXIT_INPUT;
    }
    report.exit_code()
}
