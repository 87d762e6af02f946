//! dfs_immunity: an encoded state under the matched pair coupling keeps
//! unit fidelity and zero leakage for the whole time grid.

use pairdfs::dynamics::{evolve, joint_initial_state, metrics};

use crate::config::{build_axes, build_bath, build_layout, ScenarioConfig};
use crate::report::{write_trace_csv, Check, RunReport, Verdict};
use crate::scenarios::{
    blank_report, coherence_basis_for_pairs, ideal_pair_code, initial_logical_state, RunContext,
};
use crate::CliError;

pub fn run(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let mut report = blank_report(cfg, ctx)?;
    let layout = build_layout(cfg)?;
    let axes = build_axes(cfg)?;
    let bath = build_bath(cfg)?;
    let mismatch = cfg.params.epsilons.first().copied().unwrap_or(0.0);

    let model = pairdfs::model::build_dephasing_model(&layout, &axes, &bath, mismatch)
        .map_err(CliError::Numeric)?;
    let code = ideal_pair_code(cfg, &axes)?;
    let logical = initial_logical_state(
        cfg.params.initial_logical.expect("validated"),
        code.logical_dim(),
    )?;
    let psi0 = joint_initial_state(&logical, &code, &layout).map_err(CliError::Numeric)?;
    let traj = evolve(&model, &psi0, &cfg.times).map_err(CliError::Numeric)?;
    let basis = coherence_basis_for_pairs(cfg, &axes)?;
    let trace =
        metrics(&traj, &layout, &code, &logical, Some(&basis)).map_err(CliError::Numeric)?;

    let csv = ctx.csv_path("dfs_immunity_trace.csv");
    write_trace_csv(&trace, &csv)?;
    report.csv_paths.push(csv);

    let min_fidelity = trace
        .fidelities
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let max_leakage = trace.leakages.iter().cloned().fold(0.0, f64::max);
    report.verdicts.push(Verdict::new(
        "fidelity_min",
        Check::AtLeast,
        min_fidelity,
        1.0,
        1e-9,
        ctx.tol_scale,
    ));
    report.verdicts.push(Verdict::new(
        "leakage_max",
        Check::AtMost,
        max_leakage,
        0.0,
        1e-9,
        ctx.tol_scale,
    ));
    Ok(report)
}
