use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use objectivity_cli::{check, parse_config_for, run, Mode, RunError};

/// Simulate redundant records of a qubit in a small environment and write
/// CSV traces.
#[derive(Debug, Parser)]
#[command(name = "objectivity", version)]
struct Cli {
    /// Simulation to run; may instead be given as `mode` in the config file.
    #[arg(value_enum)]
    mode: Option<Mode>,
    /// Flat `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination (overrides `output` in the config file).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Run the built-in property checks and exit.
    #[arg(long)]
    check: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.check {
        let ok = check::run_checks(&mut |name, outcome| match outcome {
            Ok(()) => println!("PASS {name}"),
            Err(e) => println!("FAIL {name}: {e}"),
        });
        return if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE };
    }
    match execute(&cli) {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(cli: &Cli) -> Result<Vec<PathBuf>, RunError> {
    let text = match &cli.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| RunError::Io { path: path.clone(), source })?,
        None => String::new(),
    };
    let spec = parse_config_for(&text, cli.mode)?;
    run(&spec, cli.output.as_deref(), &mut std::io::stdout().lock())
}
