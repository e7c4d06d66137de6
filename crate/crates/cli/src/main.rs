use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qthermo_cli::run::Options;

#[derive(Parser)]
#[command(
    name = "qthermo",
    version,
    about = "Guessed-state thermodynamics: runs and verification suites"
)]
struct Cli {
    /// Omit the generated-at line from CSV output.
    #[arg(long, global = true)]
    no_timestamp: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Output file; overrides the config's output path.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a configuration file and write one row per sweep point.
    Run { config: PathBuf },
    /// Run a built-in verification suite.
    Verify { suite: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        no_timestamp: cli.no_timestamp,
        threads: cli.threads,
        out: cli.out,
    };
    let result = match &cli.command {
        Command::Run { config } => qthermo_cli::run::run(config, &opts),
        Command::Verify { suite } => qthermo_cli::verify(suite, &opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
