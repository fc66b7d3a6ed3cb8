mod commands;
mod config;
mod output;
mod parse;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::Parser;

use config::Cli;

/// Caps the worker pool when `HARDY_BAP_THREADS` is set.
fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("HARDY_BAP_THREADS") {
        let threads: usize = value
            .trim()
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .with_context(|| format!("HARDY_BAP_THREADS={value:?} is not a positive integer"))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    configure_threads()?;
    let outcome = commands::run(&cli.command)?;
    let common = cli.command.common();
    let mut out: Box<dyn Write> = match &common.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    output::write_report(&mut out, common.format, &cli.command, &outcome.result, &outcome.table)?;
    out.flush()?;
    Ok(outcome.admissible_violation)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match execute(&cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: an inequality was violated for admissible parameters");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
