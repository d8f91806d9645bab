//! `ddwave`: dnoidal waves of the cubic–quintic double dispersion equation
//! and their spectral stability, from the command line.
//!
//! Exit codes: 0 ok, 1 I/O failure, 2 usage or inadmissible parameters,
//! 3 numerical failure, 4 no stability threshold, 5 degenerate verdict.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Flags, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ddwave::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e.root() {
                ddwave::Error::Domain(_) => 2,
                ddwave::Error::NoThreshold { .. } => 4,
                _ => 3,
            },
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(name = "ddwave", version, about = "Periodic dnoidal waves and their spectral stability")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Sample the wave profile (CSV x,phi,dphi,d2phi; header as JSON on stderr)
    Wave,
    /// Stability quantities on a grid of speeds at fixed L
    Scan,
    /// Locate the speed where det(P) changes sign
    Threshold,
    /// Full stability report at one (L, c)
    Stability,
    /// Lowest eigenvalues of the linearised operator
    Spectrum,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let cfg = RunConfig::resolve(cli.flags)?;
    let out = match cli.command {
        Command::Wave => commands::wave(&cfg)?,
        Command::Scan => commands::scan(&cfg)?,
        Command::Threshold => commands::threshold(&cfg)?,
        Command::Stability => commands::stability(&cfg)?,
        Command::Spectrum => commands::spectrum(&cfg)?,
    };

    match &cfg.out {
        Some(path) => {
            std::fs::write(path, &out.body)?;
            if let Some(meta) = &out.meta {
                std::fs::write(commands::meta_path(path), meta)?;
            }
        }
        None => {
            if let Some(meta) = &out.meta {
                eprint!("{meta}");
            }
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(out.body.as_bytes()).and_then(|()| stdout.flush());
            // a closed pipe (`| head`) is not a failure of the computation
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(e.into()),
                _ => {}
            }
        }
    }
    for note in &out.notes {
        eprintln!("{note}");
    }
    Ok(out.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
