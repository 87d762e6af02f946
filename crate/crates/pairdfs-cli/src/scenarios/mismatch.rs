//! mismatch_sweep: fidelity decay under pair-strength mismatch scales
//! quadratically (halving the mismatch quarters the decay), and a
//! mismatched pair operator no longer defines a code at all.

use pairdfs::codec::{code_space, PairOperatorSet};
use pairdfs::dynamics::{evolve, joint_initial_state, metrics};
use pairdfs::error::Error;

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
    let code = ideal_pair_code(cfg, &axes)?;
    let logical = initial_logical_state(
        cfg.params.initial_logical.expect("validated"),
        code.logical_dim(),
    )?;
    let basis = coherence_basis_for_pairs(cfg, &axes)?;
    let t_star = *cfg.times.last().expect("validated non-empty");

    let mut decays = Vec::with_capacity(cfg.params.epsilons.len());
    for (i, &eps) in cfg.params.epsilons.iter().enumerate() {
        let model = pairdfs::model::build_dephasing_model(&layout, &axes, &bath, eps)
            .map_err(CliError::Numeric)?;
        let psi0 = joint_initial_state(&logical, &code, &layout).map_err(CliError::Numeric)?;
        let traj = evolve(&model, &psi0, &cfg.times).map_err(CliError::Numeric)?;
        let trace =
            metrics(&traj, &layout, &code, &logical, Some(&basis)).map_err(CliError::Numeric)?;
        decays.push(1.0 - trace.fidelities[trace.len() - 1]);

        let csv = ctx.csv_path(&format!("mismatch_trace_{i}.csv"));
        write_trace_csv(&trace, &csv)?;
        report.csv_paths.push(csv);
    }

    // The first two entries are (eps, eps/2) by convention of the config.
    let ratio = decays[0] / decays[1];
    report.verdicts.push(
        Verdict::new("decay_ratio", Check::AbsErr, ratio, 4.0, 0.4, ctx.tol_scale).with_note(
            format!(
                "decay {:.6e} at eps={} vs {:.6e} at eps={} (t* = {t_star})",
                decays[0], cfg.params.epsilons[0], decays[1], cfg.params.epsilons[1]
            ),
        ),
    );

    let eps_reject = cfg.params.epsilon_reject.expect("validated");
    let rejected = code_space(&PairOperatorSet::new(axes.clone(), eps_reject), &layout);
    let (measured_dim, note) = match rejected {
        Err(Error::CodeConstruction {
            low,
            high,
            kernel_dim,
        }) => (
            kernel_dim as f64,
            format!("pair ({low}, {high}) rejected at mismatch {eps_reject}"),
        ),
        Ok(_) => (
            2.0,
            format!("code unexpectedly built at mismatch {eps_reject}"),
        ),
        Err(e) => return Err(CliError::Numeric(e)),
    };
    report.verdicts.push(
        Verdict::new(
            "mismatched_kernel_dim",
            Check::AbsErr,
            measured_dim,
            0.0,
            0.0,
            ctx.tol_scale,
        )
        .with_note(note),
    );
    Ok(report)
}
