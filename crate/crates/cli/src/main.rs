mod args;
mod commands;
mod demos;
mod error;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use args::{Cli, Common};
use error::CliError;
use evpos::Config;

fn config(common: &Common) -> Result<Config, CliError> {
    let mut cfg = Config::default();
    for (name, value, slot) in [
        ("tol-pos", common.tol_pos, &mut cfg.positivity_tol),
        ("tol-spec", common.tol_spec, &mut cfg.spectral_tol),
    ] {
        if let Some(v) = value {
            if !(v > 0.0 && v < 1.0) {
                return Err(CliError::precondition("InvalidParameter", format!("--{name} must lie in (0, 1), got {v}")));
            }
            *slot = v;
        }
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = config(&cli.common)?;
    let report = commands::run(&cli.command, &cfg)?;
    let bytes = output::render(&report, cli.common.format)?;
    output::emit(&bytes, cli.common.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            let err = CliError::parse(message, json!({ "kind": format!("{:?}", e.kind()) }));
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let err = err.with_context("command", cli.command.name());
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code as u8)
        }
    }
}
