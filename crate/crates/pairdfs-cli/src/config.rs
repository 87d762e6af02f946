//! Scenario configuration: a single JSON document per run. All physical
//! parameters are explicit; the only defaults are the numerical tolerances,
//! which are echoed into the report.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pairdfs::linalg::{SystemLayout, HERMITIAN_TOL, KERNEL_TOL};
use pairdfs::model::{AxisVector, BathMode, BathSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    DfsImmunity,
    MismatchSweep,
    FheMistuning,
    GeneralNoise,
    GateCheck,
    ConstraintCert,
    DephasingOracle,
    SingletCode,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            ScenarioKind::DfsImmunity => "dfs_immunity",
            ScenarioKind::MismatchSweep => "mismatch_sweep",
            ScenarioKind::FheMistuning => "fhe_mistuning",
            ScenarioKind::GeneralNoise => "general_noise",
            ScenarioKind::GateCheck => "gate_check",
            ScenarioKind::ConstraintCert => "constraint_cert",
            ScenarioKind::DephasingOracle => "dephasing_oracle",
            ScenarioKind::SingletCode => "singlet_code",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub direction: [f64; 3],
    pub strength: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SystemConfig {
    /// Number of physical qubits.
    pub qubits: usize,
    /// Qubit pairs, one entry per pair.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<[usize; 2]>,
    /// Coupling axis per pair.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<AxisConfig>,
    /// Free-Hamiltonian frequency per qubit.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub frequencies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub frequency: f64,
    pub n_max: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BathConfig {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub modes: Vec<ModeConfig>,
    /// One row per qubit, one column per mode.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub couplings: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialLogical {
    /// (|0..0> + |1..1>)/sqrt(2) over all logical qubits.
    Bell,
    /// (|0> + |1>)/sqrt(2); requires a two-dimensional logical space.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    /// Pair strength mismatches to sweep.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub epsilons: Vec<f64>,
    /// Mismatch expected to be rejected by the code constructor.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_reject: Option<f64>,
    /// Drive mistuning values to sweep.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub deltas: Vec<f64>,
    /// Single-qubit coupling strength.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    /// Single-mode frequency for the oracle comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    /// Boson truncation for the oracle comparison.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    /// Doubled truncation for the convergence certificate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max_check: Option<usize>,
    /// RNG seed; required whenever a scenario draws random inputs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Hilbert dimensions for the constraint certificate.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub dims: Vec<usize>,
    /// Number of random draws per case.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_random: Option<usize>,
    /// Number of random coupling axes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num_axes: Option<usize>,
    /// Random coupling amplitude scale.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling_scale: Option<f64>,
    /// Initial logical state for evolution scenarios.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_logical: Option<InitialLogical>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub kernel_tol: f64,
    pub hermitian_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            kernel_tol: KERNEL_TOL,
            hermitian_tol: HERMITIAN_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub system: SystemConfig,
    #[serde(default)]
    pub bath: BathConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub times: Vec<f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    let cfg: ScenarioConfig = serde_json::from_str(&text).map_err(|e| {
        if e.to_string().contains("unknown variant") {
            config_err(format!("unknown scenario in {}: {e}", path.display()))
        } else {
            config_err(format!("invalid config {}: {e}", path.display()))
        }
    })?;
    validate(&cfg)?;
    Ok(cfg)
}

fn require<T: Copy>(field: Option<T>, name: &str, scenario: &str) -> Result<T, CliError> {
    field.ok_or_else(|| config_err(format!("scenario {scenario} requires params.{name}")))
}

fn validate_times(cfg: &ScenarioConfig) -> Result<(), CliError> {
    if cfg.times.is_empty() {
        return Err(config_err(format!(
            "scenario {} requires a non-empty times list",
            cfg.scenario.name()
        )));
    }
    if cfg.times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(config_err("times not increasing"));
    }
    Ok(())
}

fn validate_paired_system(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let s = &cfg.system;
    if s.qubits == 0 {
        return Err(config_err("system.qubits must be positive"));
    }
    if s.pairs.is_empty() {
        return Err(config_err(format!(
            "scenario {} requires system.pairs",
            cfg.scenario.name()
        )));
    }
    if s.axes.len() != s.pairs.len() {
        return Err(config_err(format!(
            "system.axes has {} entries for {} pairs",
            s.axes.len(),
            s.pairs.len()
        )));
    }
    validate_bath(cfg)
}

fn validate_bath(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let b = &cfg.bath;
    if !b.modes.is_empty() && b.couplings.len() != cfg.system.qubits {
        return Err(config_err(format!(
            "bath.couplings has {} rows for {} qubits",
            b.couplings.len(),
            cfg.system.qubits
        )));
    }
    Ok(())
}

fn validate(cfg: &ScenarioConfig) -> Result<(), CliError> {
    let name = cfg.scenario.name();
    match cfg.scenario {
        ScenarioKind::DfsImmunity => {
            validate_paired_system(cfg)?;
            validate_times(cfg)?;
            require(cfg.params.initial_logical, "initial_logical", name)?;
        }
        ScenarioKind::MismatchSweep => {
            validate_paired_system(cfg)?;
            validate_times(cfg)?;
            require(cfg.params.initial_logical, "initial_logical", name)?;
            if cfg.params.epsilons.len() < 2 {
                return Err(config_err(
                    "scenario mismatch_sweep requires at least two params.epsilons",
                ));
            }
            require(cfg.params.epsilon_reject, "epsilon_reject", name)?;
        }
        ScenarioKind::FheMistuning => {
            validate_paired_system(cfg)?;
            validate_times(cfg)?;
            require(cfg.params.initial_logical, "initial_logical", name)?;
            if cfg.system.frequencies.len() != cfg.system.qubits {
                return Err(config_err(format!(
                    "system.frequencies has {} entries for {} qubits",
                    cfg.system.frequencies.len(),
                    cfg.system.qubits
                )));
            }
            if cfg.params.deltas.is_empty() {
                return Err(config_err("scenario fhe_mistuning requires params.deltas"));
            }
        }
        ScenarioKind::GeneralNoise => {
            validate_paired_system(cfg)?;
            require(cfg.params.seed, "seed", name)?;
            require(cfg.params.coupling_scale, "coupling_scale", name)?;
        }
        ScenarioKind::GateCheck => {
            if cfg.system.axes.len() != 1 || cfg.system.pairs.len() != 1 {
                return Err(config_err(
                    "scenario gate_check analyses exactly one pair (one entry in system.pairs/axes)",
                ));
            }
            validate_times(cfg)?;
            require(cfg.params.seed, "seed", name)?;
            require(cfg.params.num_random, "num_random", name)?;
        }
        ScenarioKind::ConstraintCert => {
            if cfg.params.dims.is_empty() {
                return Err(config_err("scenario constraint_cert requires params.dims"));
            }
            require(cfg.params.seed, "seed", name)?;
            require(cfg.params.num_random, "num_random", name)?;
        }
        ScenarioKind::DephasingOracle => {
            validate_times(cfg)?;
            require(cfg.params.g, "g", name)?;
            require(cfg.params.omega, "omega", name)?;
            require(cfg.params.n_max, "n_max", name)?;
            require(cfg.params.n_max_check, "n_max_check", name)?;
        }
        ScenarioKind::SingletCode => {
            // Coupling axes are drawn from the seeded RNG, not the config.
            if cfg.system.qubits != 4 {
                return Err(config_err(
                    "scenario singlet_code requires system.qubits = 4",
                ));
            }
            if cfg.system.pairs.is_empty() {
                return Err(config_err("scenario singlet_code requires system.pairs"));
            }
            validate_bath(cfg)?;
            validate_times(cfg)?;
            require(cfg.params.seed, "seed", name)?;
            require(cfg.params.num_axes, "num_axes", name)?;
            require(cfg.params.initial_logical, "initial_logical", name)?;
        }
    }
    Ok(())
}

// Conversions into the library types.

pub fn build_layout(cfg: &ScenarioConfig) -> Result<SystemLayout, CliError> {
    let pairing = cfg.system.pairs.iter().map(|p| (p[0], p[1])).collect();
    let mode_dims: Vec<usize> = cfg.bath.modes.iter().map(|m| m.n_max).collect();
    SystemLayout::qubits_with_modes(cfg.system.qubits, &mode_dims, pairing)
        .map_err(|e| config_err(format!("invalid system layout: {e}")))
}

pub fn build_axes(cfg: &ScenarioConfig) -> Result<Vec<AxisVector>, CliError> {
    cfg.system
        .axes
        .iter()
        .map(|a| {
            AxisVector::new(a.direction, a.strength)
                .map_err(|e| config_err(format!("invalid axis: {e}")))
        })
        .collect()
}

pub fn build_bath(cfg: &ScenarioConfig) -> Result<BathSpec, CliError> {
    if cfg.bath.modes.is_empty() {
        return Ok(BathSpec::empty(cfg.system.qubits));
    }
    let modes = cfg
        .bath
        .modes
        .iter()
        .map(|m| BathMode {
            frequency: m.frequency,
            n_max: m.n_max,
        })
        .collect();
    BathSpec::new(modes, cfg.bath.couplings.clone())
        .map_err(|e| config_err(format!("invalid bath: {e}")))
}
