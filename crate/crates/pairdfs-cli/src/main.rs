//! Configuration-driven scenario runner.
//!
//! Exit codes: 0 all verdicts pass, 2 configuration or IO error,
//! 3 numerical contract violation, 4 at least one FAIL verdict.

mod config;
mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::config::load_config;
use crate::scenarios::{run_scenario, RunContext};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration (exit 2).
    Config(String),
    /// Filesystem problem (exit 2).
    Io(String),
    /// A numerical contract was violated inside the toolkit (exit 3).
    Numeric(pairdfs::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(msg) => write!(f, "io error: {msg}"),
            CliError::Numeric(e) => write!(f, "numerical error: {e}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "pairdfs",
    about = "Run paired-qubit decoherence-free-subspace experiments from a JSON config"
)]
struct Cli {
    /// Path to the scenario configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output directory (overrides the config's `output`).
    #[arg(long)]
    out: Option<PathBuf>,

    /// RNG seed (overrides the config's `params.seed`).
    #[arg(long)]
    seed: Option<u64>,

    /// Multiply all verdict tolerances (debugging only; flagged in the report).
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = load_config(&cli.config)?;
    let out_dir = cli
        .out
        .clone()
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let ctx = RunContext {
        out_dir: out_dir.clone(),
        seed: cli.seed.or(cfg.params.seed),
        tol_scale: cli.tol_scale,
    };
    let report = run_scenario(&cfg, &ctx)?;
    let rendered = report.render();
    print!("{rendered}");
    println!("wall time: {:.3}s", report.wall_seconds);
    report.write_report_txt(&out_dir)?;
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Config(_) | CliError::Io(_) => ExitCode::from(2),
                CliError::Numeric(_) => ExitCode::from(3),
            }
        }
    }
}
