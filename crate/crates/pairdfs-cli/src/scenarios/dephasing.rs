//! dephasing_oracle: single-qubit coherence decay against the closed-form
//! displaced-oscillator factor, with a truncation-doubling certificate.

use num_complex::Complex64;
use pairdfs::codec::CodeSpace;
use pairdfs::dynamics::{
    bath_vacuum, decoherence_factor_oracle, evolve, metrics, reduced_qubit_density,
};
use pairdfs::linalg::{creal, kron_vec, CVec, SystemLayout};
use pairdfs::model::{build_general_model, BathMode, BathSpec, GeneralCouplingSpec, PauliAxis};

use crate::config::ScenarioConfig;
use crate::report::{write_table_csv, write_trace_csv, Check, RunReport, Verdict};
use crate::scenarios::{blank_report, RunContext};
use crate::CliError;

fn coherence_series(g: f64, omega: f64, n_max: usize, times: &[f64]) -> Result<Vec<f64>, CliError> {
    let layout = SystemLayout::qubits_with_modes(1, &[n_max], vec![]).map_err(CliError::Numeric)?;
    let bath = BathSpec::new(
        vec![BathMode {
            frequency: omega,
            n_max,
        }],
        vec![vec![g]],
    )
    .map_err(CliError::Numeric)?;
    let spec = GeneralCouplingSpec::from_fn(1, 1, |_, axis, _| {
        if axis == PauliAxis::Z {
            creal(g)
        } else {
            Complex64::default()
        }
    });
    let model = build_general_model(&layout, &spec, &bath).map_err(CliError::Numeric)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![creal(s), creal(s)]);
    let psi0 = kron_vec(&plus, &bath_vacuum(&layout));
    let traj = evolve(&model, &psi0, times).map_err(CliError::Numeric)?;
    traj.states
        .iter()
        .map(|psi| {
            let rho = reduced_qubit_density(psi, &layout).map_err(CliError::Numeric)?;
            Ok(rho[(0, 1)].norm() / 0.5)
        })
        .collect()
}

pub fn run(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let mut report = blank_report(cfg, ctx)?;
    let g = cfg.params.g.expect("validated");
    let omega = cfg.params.omega.expect("validated");
    let n_max = cfg.params.n_max.expect("validated");
    let n_check = cfg.params.n_max_check.expect("validated");

    let coarse = coherence_series(g, omega, n_max, &cfg.times)?;
    let fine = coherence_series(g, omega, n_check, &cfg.times)?;

    let mut rows = Vec::with_capacity(cfg.times.len());
    let mut max_oracle_err = 0.0f64;
    let mut max_truncation_gap = 0.0f64;
    for (i, &t) in cfg.times.iter().enumerate() {
        let oracle = decoherence_factor_oracle(g, omega, t).map_err(CliError::Numeric)?;
        max_oracle_err = max_oracle_err.max((coarse[i] - oracle).abs());
        max_truncation_gap = max_truncation_gap.max((coarse[i] - fine[i]).abs());
        rows.push(vec![t, coarse[i], oracle, (coarse[i] - oracle).abs()]);
    }

    report.verdicts.push(
        Verdict::new(
            "oracle_deviation_max",
            Check::AtMost,
            max_oracle_err,
            0.0,
            1e-4,
            ctx.tol_scale,
        )
        .with_note(format!(
            "numerical |rho_01| ratio vs exp(-(4g^2/w^2)(1 - cos wt)) at n_max = {n_max}"
        )),
    );
    report.verdicts.push(
        Verdict::new(
            "truncation_gap_max",
            Check::AtMost,
            max_truncation_gap,
            0.0,
            1e-8,
            ctx.tol_scale,
        )
        .with_note(format!(
            "n_max {n_max} vs {n_check} convergence certificate"
        )),
    );

    let csv = ctx.csv_path("dephasing_oracle.csv");
    write_table_csv("time,numeric,oracle,abs_err", &rows, &csv)?;
    report.csv_paths.push(csv);

    // Full metric trace with the trivial (identity) code for plotting.
    let layout = SystemLayout::qubits_with_modes(1, &[n_max], vec![]).map_err(CliError::Numeric)?;
    let bath = BathSpec::new(
        vec![BathMode {
            frequency: omega,
            n_max,
        }],
        vec![vec![g]],
    )
    .map_err(CliError::Numeric)?;
    let spec = GeneralCouplingSpec::from_fn(1, 1, |_, axis, _| {
        if axis == PauliAxis::Z {
            creal(g)
        } else {
            Complex64::default()
        }
    });
    let model = build_general_model(&layout, &spec, &bath).map_err(CliError::Numeric)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = CVec::from_vec(vec![creal(s), creal(s)]);
    let code = CodeSpace::identity(2);
    let psi0 = kron_vec(&plus, &bath_vacuum(&layout));
    let traj = evolve(&model, &psi0, &cfg.times).map_err(CliError::Numeric)?;
    let trace = metrics(&traj, &layout, &code, &plus, None).map_err(CliError::Numeric)?;
    let trace_csv = ctx.csv_path("dephasing_trace.csv");
    write_trace_csv(&trace, &trace_csv)?;
    report.csv_paths.push(trace_csv);
    Ok(report)
}
