//! afmq: decoherence-rate figure data, cluster spectra, and impurity
//! thresholds as reproducible CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 2 configuration/validation error, 3 numerical
//! failure. Output is written only after a command fully succeeds, so a
//! nonzero exit never leaves a partial file.

mod commands;
mod config;

use clap::{Parser, Subcommand};
use config::OutputFormat;
use std::path::PathBuf;
use std::process::ExitCode;

const OUT_DIR_ENV: &str = "AFMQ_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn from_validation(e: afmq_core::ModelError) -> Self {
        CliError::Config(format!("{e} (code {})", e.code()))
    }

    pub fn from_validation_adiabatic(e: afmq_core::AdiabaticError) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn from_rate(e: afmq_core::RateError) -> Self {
        use afmq_core::RateError::*;
        match e {
            Quadrature(_) | AtGridPoint { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }

    pub fn from_two_qubit(e: afmq_core::TwoQubitError) -> Self {
        use afmq_core::TwoQubitError::*;
        match e {
            Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }

    pub fn from_dfs(e: afmq_core::DfsError) -> Self {
        use afmq_core::DfsError::*;
        match e {
            DegeneracyResolution(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "afmq",
    version,
    about = "Decoherence rates of antiferromagnet-hosted nuclear-spin qubits"
)]
struct Cli {
    /// JSON run configuration; built-in defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output path (overrides the config's `out`; stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (overrides the config's `format`).
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Override any config leaf by dotted path, e.g. --set model.b_C=0.4
    /// or --set separations.1=299. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// One-qubit rate curves R(Δb, τ) for a list of detunings.
    Fig2,
    /// Pair correlation-rate curves over separations.
    Fig3,
    /// Total concurrence damping rate curves with per-term breakdown.
    Fig4,
    /// Analytic and numeric spectrum of the four-spin planar cluster.
    DfsTable,
    /// Impurity mean-square modulation and allowable concentration.
    Impurity,
    /// Single-point evaluation of any rate operation.
    Rate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("afmq: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let defaults = match cli.command {
        Command::Fig2 => config::default_fig2(),
        Command::Fig3 | Command::Fig4 => config::default_pair_fig(),
        Command::DfsTable => config::default_dfs(),
        Command::Impurity => config::default_impurity(),
        Command::Rate => config::default_rate(),
    };
    let loaded = config::load(cli.config.as_deref(), defaults, &cli.set)?;
    let format = cli
        .format
        .or(loaded.format)
        .unwrap_or(match cli.command {
            Command::Fig2 | Command::Fig3 | Command::Fig4 => OutputFormat::Csv,
            _ => OutputFormat::Json,
        });

    let output = match cli.command {
        Command::Fig2 => commands::fig2(&config::parse_section(&loaded.value)?, format)?,
        Command::Fig3 => commands::fig3(&config::parse_section(&loaded.value)?, format)?,
        Command::Fig4 => commands::fig4(&config::parse_section(&loaded.value)?, format)?,
        Command::DfsTable => commands::dfs_table(&config::parse_section(&loaded.value)?)?,
        Command::Impurity => commands::impurity(&config::parse_section(&loaded.value)?)?,
        Command::Rate => commands::rate(&config::parse_section(&loaded.value)?)?,
    };

    match cli.out.clone().or(loaded.out) {
        Some(path) => {
            let resolved = resolve_out_path(path);
            std::fs::write(&resolved, output).map_err(|e| {
                CliError::config(format!("cannot write {}: {e}", resolved.display()))
            })?;
        }
        None => {
            print!("{output}");
        }
    }
    Ok(())
}

/// Relative output paths land in $AFMQ_OUT_DIR when it is set.
fn resolve_out_path(path: PathBuf) -> PathBuf {
    if path.is_absolute() {
        return path;
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path,
    }
}
