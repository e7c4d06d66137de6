//! Batch driver for the one-time-measurement thermodynamics library.
//!
//! `run` evaluates a TOML configuration (model, optional sweep, checks) into
//! CSV or JSON rows; `verify` runs one of the built-in verification suites.

pub mod checks;
pub mod config;
pub mod metrics;
pub mod output;
pub mod run;
pub mod suites;

use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum Failure {
    #[error("{0}")]
    Config(#[from] config::ConfigError),
    #[error("unknown suite `{name}`; available: {}", suites::SUITES.join(", "))]
    UnknownSuite { name: String },
    #[error("{0}")]
    Check(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error("cannot write output: {0}")]
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Check(_) | Failure::Evaluation(_) => ExitCode::from(1),
            _ => ExitCode::from(2),
        }
    }
}

/// The `verify` command: run a suite, print its table, optionally write it as CSV.
pub fn verify(suite: &str, opts: &run::Options) -> Result<(), Failure> {
    let pool = run::thread_pool(opts.threads);
    let lines = pool
        .install(|| suites::run_suite(suite))
        .ok_or_else(|| Failure::UnknownSuite {
            name: suite.to_string(),
        })?;
    print!("{}", suites::render(&lines));
    if let Some(path) = &opts.out {
        let f = std::fs::File::create(path)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let ts = (!opts.no_timestamp).then(output::unix_now);
        suites::table(&lines)
            .write_csv(f, ts)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    match suites::worst_failure(&lines) {
        Some(msg) => Err(Failure::Check(msg)),
        None => Ok(()),
    }
}
