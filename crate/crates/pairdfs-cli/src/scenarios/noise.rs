//! general_noise: a generic qubit-boson coupling conserves no register
//! observable beyond the identity, while the restricted table (z generator,
//! real pair-symmetric amplitudes) reproduces the dephasing builder.

use num_complex::Complex64;
use pairdfs::gates::conserved_observable_space;
use pairdfs::linalg::max_abs;
use pairdfs::model::{build_dephasing_model, build_general_model, GeneralCouplingSpec, PauliAxis};
use pairdfs::sample::{random_coupling_spec, seeded_rng};

use crate::config::{build_axes, build_bath, build_layout, ScenarioConfig};
use crate::report::{Check, RunReport, Verdict};
use crate::scenarios::{blank_report, RunContext};
use crate::CliError;

pub fn run(cfg: &ScenarioConfig, ctx: &RunContext) -> Result<RunReport, CliError> {
    let mut report = blank_report(cfg, ctx)?;
    let layout = build_layout(cfg)?;
    let axes = build_axes(cfg)?;
    let bath = build_bath(cfg)?;
    let seed = ctx.require_seed(cfg.scenario.name())?;
    let scale = cfg.params.coupling_scale.expect("validated");

    let mut rng = seeded_rng(seed);
    let generic = random_coupling_spec(&mut rng, cfg.system.qubits, bath.num_modes(), scale);
    let model = build_general_model(&layout, &generic, &bath).map_err(CliError::Numeric)?;
    let space = conserved_observable_space(&model).map_err(CliError::Numeric)?;
    report.verdicts.push(
        Verdict::new(
            "conserved_dimension",
            Check::AbsErr,
            space.dimension() as f64,
            1.0,
            0.0,
            ctx.tol_scale,
        )
        .with_note("a generic coupling conserves only the identity".to_string()),
    );

    // Restriction: only the z generator, real amplitudes equal to the
    // coupling row scaled by the axis strength.
    let restricted =
        GeneralCouplingSpec::from_fn(cfg.system.qubits, bath.num_modes(), |l, axis, k| {
            if axis == PauliAxis::Z {
                let pair_index = cfg
                    .system
                    .pairs
                    .iter()
                    .position(|p| p[0] == l || p[1] == l)
                    .expect("fully paired");
                Complex64::new(axes[pair_index].strength() * bath.coupling_row(l)[k], 0.0)
            } else {
                Complex64::default()
            }
        });
    let reduced = build_general_model(&layout, &restricted, &bath).map_err(CliError::Numeric)?;
    let z_axes: Vec<_> = axes
        .iter()
        .map(|a| pairdfs::model::AxisVector::z(a.strength()))
        .collect();
    let dephasing =
        build_dephasing_model(&layout, &z_axes, &bath, 0.0).map_err(CliError::Numeric)?;
    let gap = max_abs(&(reduced.total() - dephasing.total()));
    report.verdicts.push(
        Verdict::new(
            "reduction_gap",
            Check::AtMost,
            gap,
            0.0,
            1e-12,
            ctx.tol_scale,
        )
        .with_note(
            "entrywise distance between the restricted general model and the dephasing builder"
                .to_string(),
        ),
    );
    Ok(report)
}
