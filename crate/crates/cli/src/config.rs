//! Command-line flags, the optional JSON config file, and their merge.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ddwave::stability::{DEFAULT_MODES, DEFAULT_SAMPLES};
use ddwave::WaveParams;
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. The same keys (with `_` for `-`) are
/// accepted in the `--config` file; flags given on the command line win.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// Spatial period L
    #[arg(long = "L", global = true, value_name = "L")]
    #[serde(rename = "L")]
    pub length: Option<f64>,

    /// Wave speed c
    #[arg(long, global = true)]
    pub c: Option<f64>,

    /// Lowest speed of a scan [default: 0.05]
    #[arg(long, global = true)]
    pub c_min: Option<f64>,

    /// Highest speed of a scan [default: c_max(L) - 0.01]
    #[arg(long, global = true)]
    pub c_max: Option<f64>,

    /// Number of scan speeds, at least 2 [default: 45]
    #[arg(long, global = true)]
    pub steps: Option<usize>,

    /// Profile samples per period [default: 1024]
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Fourier modes of the Galerkin spectrum [default: 128]
    #[arg(long, global = true)]
    pub modes: Option<usize>,

    /// Bisection tolerance of the threshold search [default: 1e-6]
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Output format [default: per command]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON file with default values for any of the flags above
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Flags {
    /// Fills every absent flag from `file`.
    fn or(self, file: Flags) -> Flags {
        Flags {
            length: self.length.or(file.length),
            c: self.c.or(file.c),
            c_min: self.c_min.or(file.c_min),
            c_max: self.c_max.or(file.c_max),
            steps: self.steps.or(file.steps),
            samples: self.samples.or(file.samples),
            modes: self.modes.or(file.modes),
            tol: self.tol.or(file.tol),
            format: self.format.or(file.format),
            out: self.out.or(file.out),
            config: self.config,
        }
    }
}

/// Resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    length: Option<f64>,
    c: Option<f64>,
    pub c_min: Option<f64>,
    pub c_max: Option<f64>,
    pub steps: Option<usize>,
    pub samples: usize,
    pub modes: usize,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

fn read_config(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let flags = match &flags.config {
            Some(path) => {
                let file = read_config(path)?;
                flags.or(file)
            }
            None => flags,
        };
        Ok(Self {
            length: flags.length,
            c: flags.c,
            c_min: flags.c_min,
            c_max: flags.c_max,
            steps: flags.steps,
            samples: flags.samples.unwrap_or(DEFAULT_SAMPLES),
            modes: flags.modes.unwrap_or(DEFAULT_MODES),
            tol: flags.tol.unwrap_or(DEFAULT_TOL),
            format: flags.format,
            out: flags.out,
        })
    }

    pub fn length(&self) -> Result<f64, CliError> {
        self.length.ok_or_else(|| CliError::Usage("missing --L".into()))
    }

    /// The single admissible `(L, c)` pair of the run.
    pub fn params(&self) -> Result<WaveParams, CliError> {
        let length = self.length()?;
        let c = self.c.ok_or_else(|| CliError::Usage("missing --c".into()))?;
        Ok(WaveParams::new(length, c)?)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}
