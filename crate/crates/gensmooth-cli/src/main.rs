//! Command-line front end for the gensmooth library.
//!
//! Every subcommand prints a JSON report to stdout (or `--output`). Exit
//! codes: 0 on success, 1 when a verification found a failing property,
//! 2 for a malformed invocation, 3 when an operation rejected its inputs
//! (the report is then an error envelope with a machine-readable code).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

mod args;
mod config;
mod exec;
mod plot;
mod sources;

fn emit(value: &Value, output: &Option<PathBuf>) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        // Renders help/version (exit 0) and usage errors (exit 2).
        Err(err) => err.exit(),
    };
    match exec::dispatch(cli.command) {
        Ok(outcome) => {
            if let Err(err) = emit(&outcome.json, &outcome.output) {
                eprintln!("error: cannot write report: {err}");
                return ExitCode::from(3);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(exec::Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(exec::Failure::Module {
            code,
            message,
            output,
        }) => {
            let envelope = json!({ "error": { "code": code, "message": message } });
            if let Err(err) = emit(&envelope, &output) {
                eprintln!("error: cannot write report: {err}");
            }
            eprintln!("error[{code}]: {message}");
            ExitCode::from(3)
        }
    }
}
