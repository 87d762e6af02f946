//! Closed joint evolution under a model Hamiltonian, reduction to the
//! qubit register, and the fidelity/coherence/purity/leakage time series,
//! plus the two closed-form oracles the simulations are checked against.
//!
//! The bath always starts in the vacuum of every mode; evolution is exact
//! spectral propagation of the time-independent total Hamiltonian.

use crate::codec::{encode, CodeSpace};
use crate::error::{Error, Result};
use crate::linalg::{creal, hermitian_eig, partial_trace, CMat, CVec, SystemLayout};
use crate::model::HamiltonianModel;

/// Joint kets sampled on an explicit time grid.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CVec>,
}

/// Scalar metrics along a trajectory.
#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub coherences: Vec<f64>,
    pub purities: Vec<f64>,
    pub leakages: Vec<f64>,
}

const METRIC_SLACK: f64 = 1e-10;

impl EvolutionTrace {
    pub fn new(
        times: Vec<f64>,
        fidelities: Vec<f64>,
        coherences: Vec<f64>,
        purities: Vec<f64>,
        leakages: Vec<f64>,
    ) -> Result<Self> {
        let n = times.len();
        for (name, list) in [
            ("fidelities", &fidelities),
            ("coherences", &coherences),
            ("purities", &purities),
            ("leakages", &leakages),
        ] {
            if list.len() != n {
                return Err(Error::Shape(format!(
                    "{name} has {} entries for {n} times",
                    list.len()
                )));
            }
        }
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Validation(
                "times must be strictly increasing".to_string(),
            ));
        }
        for &f in &fidelities {
            if !(-METRIC_SLACK..=1.0 + METRIC_SLACK).contains(&f) {
                return Err(Error::Contract(format!("fidelity {f} outside [0, 1]")));
            }
        }
        for &l in &leakages {
            if !(-METRIC_SLACK..=1.0 + METRIC_SLACK).contains(&l) {
                return Err(Error::Contract(format!("leakage {l} outside [0, 1]")));
            }
        }
        for &p in &purities {
            if !(0.0..=1.0 + METRIC_SLACK).contains(&p) {
                return Err(Error::Contract(format!("purity {p} outside (0, 1]")));
            }
        }
        for &c in &coherences {
            if c < -METRIC_SLACK {
                return Err(Error::Contract(format!("coherence {c} negative")));
            }
        }
        Ok(Self {
            times,
            fidelities,
            coherences,
            purities,
            leakages,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Evolve `psi0` under the model for every listed time, reusing one
/// spectral decomposition of the total Hamiltonian.
pub fn evolve(model: &HamiltonianModel, psi0: &CVec, times: &[f64]) -> Result<Trajectory> {
    let dim = model.layout().total_dim();
    if psi0.len() != dim {
        return Err(Error::Shape(format!(
            "initial state has dimension {}, model acts on {dim}",
            psi0.len()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(format!(
            "initial state norm {} is not 1",
            psi0.norm()
        )));
    }
    let decomp = hermitian_eig(model.total())?;
    let coeffs = decomp.vectors.adjoint() * psi0;
    let states = times
        .iter()
        .map(|&t| {
            let phased = CVec::from_fn(dim, |i, _| {
                coeffs[i] * (crate::linalg::cplx(0.0, -decomp.eigenvalues[i] * t)).exp()
            });
            &decomp.vectors * phased
        })
        .collect();
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Reduced density matrix of the qubit register.
pub fn reduced_qubit_density(psi: &CVec, layout: &SystemLayout) -> Result<CMat> {
    let rho = psi * psi.adjoint();
    partial_trace(&rho, layout, &layout.qubit_factors())
}

/// Sum of off-diagonal magnitudes, optionally in a rotated basis
/// (rho -> u rho u†).
pub fn coherence_sum(rho: &CMat, basis: Option<&CMat>) -> f64 {
    let rotated = match basis {
        Some(u) => u * rho * u.adjoint(),
        None => rho.clone(),
    };
    let mut total = 0.0;
    for r in 0..rotated.nrows() {
        for c in 0..rotated.ncols() {
            if r != c {
                total += rotated[(r, c)].norm();
            }
        }
    }
    total
}

/// tr(rho^2).
pub fn purity(rho: &CMat) -> f64 {
    (rho * rho).trace().re
}

/// <psi| rho |psi>.
pub fn state_fidelity(psi: &CVec, rho: &CMat) -> f64 {
    (psi.adjoint() * rho * psi)[(0, 0)].re
}

/// Metrics of a trajectory against an encoded logical target state.
///
/// Coherence is measured in the basis that diagonalizes the conserved
/// one-qubit operators: pass the canonicalization unitary of the register
/// (`None` for an already-diagonal, sigma_z-axis model).
pub fn metrics(
    traj: &Trajectory,
    layout: &SystemLayout,
    code: &CodeSpace,
    psi_logical: &CVec,
    coherence_basis: Option<&CMat>,
) -> Result<EvolutionTrace> {
    if code.physical_dim() != layout.qubit_dim() {
        return Err(Error::Shape(format!(
            "code lives on dimension {}, register has {}",
            code.physical_dim(),
            layout.qubit_dim()
        )));
    }
    if (psi_logical.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::Validation(
            "logical state must be normalized".to_string(),
        ));
    }
    if let Some(u) = coherence_basis {
        if u.nrows() != layout.qubit_dim() || u.ncols() != layout.qubit_dim() {
            return Err(Error::Shape(
                "coherence basis must be a unitary on the qubit register".to_string(),
            ));
        }
    }
    let target = encode(psi_logical, code)?;
    let projector = code.projector();

    let mut fidelities = Vec::with_capacity(traj.states.len());
    let mut coherences = Vec::with_capacity(traj.states.len());
    let mut purities = Vec::with_capacity(traj.states.len());
    let mut leakages = Vec::with_capacity(traj.states.len());
    for psi in &traj.states {
        let rho = reduced_qubit_density(psi, layout)?;
        fidelities.push(state_fidelity(&target, &rho));
        coherences.push(coherence_sum(&rho, coherence_basis));
        purities.push(purity(&rho));
        leakages.push(1.0 - (&projector * &rho).trace().re);
    }
    EvolutionTrace::new(
        traj.times.clone(),
        fidelities,
        coherences,
        purities,
        leakages,
    )
}

/// Vacuum of the bath factor.
pub fn bath_vacuum(layout: &SystemLayout) -> CVec {
    let mut v = CVec::zeros(layout.bath_dim());
    v[0] = creal(1.0);
    v
}

/// Encoded logical state joined with the bath vacuum.
pub fn joint_initial_state(
    psi_logical: &CVec,
    code: &CodeSpace,
    layout: &SystemLayout,
) -> Result<CVec> {
    let physical = encode(psi_logical, code)?;
    Ok(crate::linalg::kron_vec(&physical, &bath_vacuum(layout)))
}

/// Exact vacuum coherence magnitude for one qubit coupled as
/// sigma_z ⊗ g (a + a†) to a single mode of frequency omega:
/// exp(-(4 g^2 / omega^2)(1 - cos omega t)).
pub fn decoherence_factor_oracle(g: f64, omega: f64, t: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(Error::Validation(format!(
            "mode frequency must be > 0, got {omega}"
        )));
    }
    let ratio = g / omega;
    Ok((-(4.0 * ratio * ratio) * (1.0 - (omega * t).cos())).exp())
}

/// Logical fidelity of (|0_L> + |1_L>)/sqrt(2) on the sigma_z pair code
/// under the residual free Hamiltonian delta (omega_1 sigma_z^(1) +
/// omega_2 sigma_z^(2))/2 left by a mistuned drive: cos^2(delta d_omega t / 2)
/// with d_omega = omega_1 - omega_2.
pub fn fhe_mistuning_fidelity(delta: f64, delta_omega: f64, t: f64) -> f64 {
    let phase = 0.5 * delta * delta_omega * t;
    let c = phase.cos();
    c * c
}
