//! `chromatic`: derivations, Hochschild tables and splitting checks for
//! Johnson-Wilson theories, with reproducible run manifests.

mod check;
mod config;
mod derive;
mod hh;
mod manifest;
mod reproduce;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{RunConfig, UsageError};
use crate::manifest::Run;

#[derive(Debug, Parser)]
#[command(name = "chromatic", version, about)]
struct Cli {
    /// Write artifacts, manifest.json and timing.json here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Cache directory for universal formal group laws.
    #[arg(long, global = true, env = chromatic_core::formal_groups::CACHE_DIR_ENV)]
    cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Derive the presentation of K(i)_*E(n) through stage m.
    Derive(derive::DeriveArgs),
    /// Hochschild homology of a presented algebra.
    Hh(hh::HhArgs),
    /// Consistency checks for splittings and spectral sequences.
    #[command(subcommand)]
    Check(check::CheckCommand),
    /// Run the fixture suite and print a pass/fail matrix.
    Reproduce(reproduce::ReproduceArgs),
}

#[derive(Serialize)]
struct ErrorReport {
    schema: &'static str,
    kind: String,
    message: String,
    causes: Vec<String>,
}

fn error_kind(err: &anyhow::Error) -> String {
    match err
        .chain()
        .find_map(|e| e.downcast_ref::<chromatic_core::Error>())
    {
        Some(e) => {
            let debug = format!("{e:?}");
            debug
                .split(|c: char| !c.is_alphanumeric())
                .next()
                .unwrap_or("Error")
                .to_string()
        }
        None => "Failure".to_string(),
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<Run> {
    match &cli.command {
        Command::Derive(args) => {
            let config = derive::config(args, cli.cache_dir.as_ref());
            config.validate(1)?;
            derive::run(args, config)
        }
        Command::Hh(args) => {
            let config: RunConfig = hh::config(args);
            config.validate(0)?;
            hh::run(args, config)
        }
        Command::Check(cmd) => {
            let config = check::config(cmd);
            config.validate(0)?;
            check::run(cmd, config)
        }
        Command::Reproduce(args) => {
            let config = reproduce::config(args);
            config.validate(0)?;
            reproduce::run(args, config)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(run) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(run.display.as_bytes());
            if let Some(dir) = &cli.out {
                if let Err(e) = run.write(dir, start.elapsed()) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            }
            for v in run.verdicts.iter().filter(|v| !v.passed) {
                eprintln!("verdict failed: {}", v.name);
            }
            if run.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            let report = ErrorReport {
                schema: "chromatic.error/v1",
                kind: error_kind(&e),
                message: format!("{e}"),
                causes: e.chain().skip(1).map(|c| c.to_string()).collect(),
            };
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ExitCode::from(1)
        }
    }
}
