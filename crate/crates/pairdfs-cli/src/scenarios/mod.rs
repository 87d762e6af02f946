//! One runner per scenario; each builds its models from the configuration,
//! writes its CSV traces, and scores the claims it exercises.

mod constraint;
mod dephasing;
mod dfs;
mod fhe;
mod gates;
mod mismatch;
mod noise;
mod singlet;

use std::path::PathBuf;
use std::time::Instant;

use pairdfs::codec::CodeSpace;
use pairdfs::linalg::{creal, CMat, CVec};
use pairdfs::model::{canonicalization_unitary, AxisVector};

use crate::config::{InitialLogical, ScenarioConfig, ScenarioKind};
use crate::report::RunReport;
use crate::CliError;

/// Resolved run options shared by every scenario.
pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub tol_scale: f64,
}

impl RunContext {
    pub fn require_seed(&self, scenario: &str) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| {
            CliError::Config(format!(
                "scenario {scenario} requires params.seed or --seed"
            ))
        })
    }

    pub fn csv_path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

pub fn run_scenario(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let started = Instant::now();
    let mut report = match cfg.scenario {
        ScenarioKind::DfsImmunity => dfs::run(cfg, ctx)?,
        ScenarioKind::MismatchSweep => mismatch::run(cfg, ctx)?,
        ScenarioKind::FheMistuning => fhe::run(cfg, ctx)?,
        ScenarioKind::GeneralNoise => noise::run(cfg, ctx)?,
        ScenarioKind::GateCheck => gates::run(cfg, ctx)?,
        ScenarioKind::ConstraintCert => constraint::run(cfg, ctx)?,
        ScenarioKind::DephasingOracle => dephasing::run(cfg, ctx)?,
        ScenarioKind::SingletCode => singlet::run(cfg, ctx)?,
    };
    report.wall_seconds = started.elapsed().as_secs_f64();
    Ok(report)
}

fn blank_report(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let config_echo = serde_json::to_string_pretty(cfg)
        .map_err(|e| CliError::Config(format!("cannot echo config: {e}")))?;
    Ok(RunReport {
        scenario: cfg.scenario.name().to_string(),
        seed: ctx.seed,
        tol_scale: ctx.tol_scale,
        config_echo,
        verdicts: Vec::new(),
        csv_paths: Vec::new(),
        wall_seconds: 0.0,
    })
}

/// Initial logical ket for an evolution scenario.
fn initial_logical_state(choice: InitialLogical, logical_dim: usize) -> Result<CVec, CliError> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match choice {
        InitialLogical::Bell => {
            if logical_dim < 2 {
                return Err(CliError::Config(
                    "bell initial state needs at least one logical qubit".to_string(),
                ));
            }
            let mut v = CVec::zeros(logical_dim);
            v[0] = creal(s);
            v[logical_dim - 1] = creal(s);
            Ok(v)
        }
        InitialLogical::Plus => {
            if logical_dim != 2 {
                return Err(CliError::Config(format!(
                    "plus initial state needs a 2-dimensional logical space, got {logical_dim}"
                )));
            }
            Ok(CVec::from_vec(vec![creal(s), creal(s)]))
        }
    }
}

/// The register-wide rotation that diagonalizes every pair's coupling
/// operator: each qubit inherits the axis of its pair.
fn coherence_basis_for_pairs(cfg: &ScenarioConfig, axes: &[AxisVector]) -> Result<CMat, CliError> {
    let mut per_qubit = vec![AxisVector::z(1.0); cfg.system.qubits];
    for (pair, axis) in cfg.system.pairs.iter().zip(axes) {
        per_qubit[pair[0]] = *axis;
        per_qubit[pair[1]] = *axis;
    }
    canonicalization_unitary(&per_qubit)
        .map_err(|e| CliError::Config(format!("cannot canonicalize axes: {e}")))
}

/// Code built from the configured pair axes at mismatch 0 (the ideal code).
fn ideal_pair_code(cfg: &ScenarioConfig, axes: &[AxisVector]) -> Result<CodeSpace, CliError> {
    let layout = crate::config::build_layout(cfg)?;
    pairdfs::codec::code_space(
        &pairdfs::codec::PairOperatorSet::new(axes.to_vec(), 0.0),
        &layout,
    )
    .map_err(CliError::Numeric)
}
