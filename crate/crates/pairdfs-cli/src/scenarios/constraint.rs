//! constraint_cert: the least-squares residual of [H, X] = I equals
//! sqrt(d) for every Hermitian X, and the trace certificate rejects every
//! claimed nonzero shift.

use num_complex::Complex64;
use pairdfs::gates::{
    solve_shift_constraint, trace_certificate, CERTIFICATE_TOL, SHIFT_SOLVER_TOL,
};
use pairdfs::sample::{random_hermitian, stream_rng};

use crate::config::ScenarioConfig;
use crate::report::{write_table_csv, Check, RunReport, Verdict};
use crate::scenarios::{blank_report, RunContext};
use crate::CliError;

const CLAIMED_SHIFTS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 0.5),
    Complex64::new(-0.3, 0.2),
    Complex64::new(0.0, 1e-8),
];

pub fn run(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let mut report = blank_report(cfg, ctx)?;
    let seed = ctx.require_seed(cfg.scenario.name())?;
    let trials = cfg.params.num_random.expect("validated");

    let mut rows = Vec::new();
    let mut worst_dev = 0.0f64;
    let mut worst_n = 0.0f64;
    let mut accepted_nonzero = 0usize;
    let mut claims = 0usize;
    for &d in &cfg.params.dims {
        // Independent stream per dimension.
        let mut rng = stream_rng(seed, d as u64);
        for trial in 0..trials {
            let x = random_hermitian(&mut rng, d, 1.0);
            let rep = solve_shift_constraint(&x).map_err(CliError::Numeric)?;
            let deviation = (rep.residual - rep.analytic_residual).abs();
            worst_dev = worst_dev.max(deviation);
            worst_n = worst_n.max(rep.certified_n.norm());
            rows.push(vec![
                d as f64,
                trial as f64,
                rep.residual,
                rep.analytic_residual,
                deviation,
                rep.certified_n.norm(),
            ]);

            let h = random_hermitian(&mut rng, d, 1.0);
            for n in CLAIMED_SHIFTS {
                let cert = trace_certificate(&x, &h, n).map_err(CliError::Numeric)?;
                claims += 1;
                if cert.accepted {
                    accepted_nonzero += 1;
                }
            }
        }
    }

    report.verdicts.push(
        Verdict::new(
            "residual_deviation_max",
            Check::AtMost,
            worst_dev,
            0.0,
            SHIFT_SOLVER_TOL,
            ctx.tol_scale,
        )
        .with_note(format!(
            "max |residual - sqrt(d)| over dims {:?} x {trials} random operators",
            cfg.params.dims
        )),
    );
    report.verdicts.push(Verdict::new(
        "certified_n_max",
        Check::AtMost,
        worst_n,
        0.0,
        CERTIFICATE_TOL,
        ctx.tol_scale,
    ));
    report.verdicts.push(
        Verdict::new(
            "nonzero_claims_accepted",
            Check::AbsErr,
            accepted_nonzero as f64,
            0.0,
            0.0,
            ctx.tol_scale,
        )
        .with_note(format!(
            "{claims} claimed shifts with |n| > 1e-10, all rejected"
        )),
    );

    let csv = ctx.csv_path("constraint_residuals.csv");
    write_table_csv(
        "dim,trial,residual,analytic_residual,deviation,certified_n_abs",
        &rows,
        &csv,
    )?;
    report.csv_paths.push(csv);
    Ok(report)
}
