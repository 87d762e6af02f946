//! gate_check: the commutant of the pair operator has the multiplicity
//! dimension, commutant-generated gates never leave the code space, and a
//! non-commuting generator leaves it immediately.

use pairdfs::gates::{commutant_basis, gate_preserves_code};
use pairdfs::linalg::{kron, CMat};
use pairdfs::model::pauli_x;
use pairdfs::sample::seeded_rng;
use rand::Rng;

use crate::config::{build_axes, ScenarioConfig};
use crate::report::{write_table_csv, Check, RunReport, Verdict};
use crate::scenarios::{blank_report, ideal_pair_code, RunContext};
use crate::CliError;

pub fn run(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let mut report = blank_report(cfg, ctx)?;
    let axes = build_axes(cfg)?;
    let seed = ctx.require_seed(cfg.scenario.name())?;
    let num_random = cfg.params.num_random.expect("validated");

    let x = pairdfs::codec::pair_operator(&axes[0], 0.0);
    let basis = commutant_basis(&[x]).map_err(CliError::Numeric)?;
    report.verdicts.push(Verdict::new(
        "commutant_dimension",
        Check::AbsErr,
        basis.dimension() as f64,
        6.0,
        0.0,
        ctx.tol_scale,
    ));

    let code = ideal_pair_code(cfg, &axes[..1])?;
    let mut rng = seeded_rng(seed);
    let mut rows = Vec::new();
    let mut max_defect = 0.0f64;
    for element in 0..num_random {
        let coeffs: Vec<f64> = (0..basis.dimension())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let h = basis.combination(&coeffs).map_err(CliError::Numeric)?;
        for &t in &cfg.times {
            let defect = gate_preserves_code(&h, &code, t).map_err(CliError::Numeric)?;
            rows.push(vec![element as f64, t, defect]);
            max_defect = max_defect.max(defect);
        }
    }
    report.verdicts.push(
        Verdict::new(
            "commutant_gate_defect_max",
            Check::AtMost,
            max_defect,
            0.0,
            1e-10,
            ctx.tol_scale,
        )
        .with_note(format!(
            "{num_random} random commutant elements over {} times",
            cfg.times.len()
        )),
    );

    // A single-qubit generator outside the commutant maps kernel states
    // toward the outer eigenspaces.
    let flip = kron(&pauli_x(), &CMat::identity(2, 2));
    let t_probe = cfg
        .times
        .iter()
        .copied()
        .find(|&t| t >= 1.0)
        .unwrap_or(*cfg.times.last().expect("validated non-empty"));
    let flip_defect = gate_preserves_code(&flip, &code, t_probe).map_err(CliError::Numeric)?;
    report.verdicts.push(
        Verdict::new(
            "noncommuting_gate_defect",
            Check::AtLeast,
            flip_defect,
            0.1,
            0.0,
            ctx.tol_scale,
        )
        .with_note(format!("sigma_x on the first pair member at t = {t_probe}")),
    );

    let csv = ctx.csv_path("gate_defects.csv");
    write_table_csv("element,time,defect", &rows, &csv)?;
    report.csv_paths.push(csv);
    Ok(report)
}
