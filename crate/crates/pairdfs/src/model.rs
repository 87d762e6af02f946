//! Hamiltonian families over a qubits ⊗ truncated-boson layout.
//!
//! Builders for the dephasing (system-operator ⊗ bath-operator) coupling
//! with an optional pair-strength mismatch, the general qubit-boson
//! coupling it is a special case of, free qubit Hamiltonians, and the
//! drive that cancels them up to a mistuning factor. Units: hbar = 1, all
//! energies relative to a reference mode frequency of order 1.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    cplx, creal, is_hermitian, kron, kron_all, max_abs, CMat, SystemLayout, HERMITIAN_TOL,
};

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[creal(0.0), creal(1.0), creal(1.0), creal(0.0)])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(
        2,
        2,
        &[creal(0.0), cplx(0.0, -1.0), cplx(0.0, 1.0), creal(0.0)],
    )
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[creal(1.0), creal(0.0), creal(0.0), creal(-1.0)])
}

/// Generator label of the one-qubit coupling operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn matrix(self) -> CMat {
        match self {
            PauliAxis::X => pauli_x(),
            PauliAxis::Y => pauli_y(),
            PauliAxis::Z => pauli_z(),
        }
    }

    pub fn index(self) -> usize {
        match self {
            PauliAxis::X => 0,
            PauliAxis::Y => 1,
            PauliAxis::Z => 2,
        }
    }
}

/// Direction and strength of a traceless Hermitian one-qubit operator
/// S = s (n_x sigma_x + n_y sigma_y + n_z sigma_z). The direction is stored
/// normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisVector {
    direction: [f64; 3],
    strength: f64,
}

impl AxisVector {
    pub fn new(direction: [f64; 3], strength: f64) -> Result<Self> {
        let norm = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm <= 1e-12 {
            return Err(Error::Validation(
                "axis direction must be nonzero and finite".to_string(),
            ));
        }
        if !strength.is_finite() || strength < 0.0 {
            return Err(Error::Validation(format!(
                "axis strength must be >= 0, got {strength}"
            )));
        }
        Ok(Self {
            direction: [
                direction[0] / norm,
                direction[1] / norm,
                direction[2] / norm,
            ],
            strength,
        })
    }

    pub fn z(strength: f64) -> Self {
        Self::new([0.0, 0.0, 1.0], strength).unwrap()
    }

    pub fn direction(&self) -> [f64; 3] {
        self.direction
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }
}

/// S = s (n · sigma): Hermitian, traceless, eigenvalues ±s.
pub fn pauli_axis_op(axis: &AxisVector) -> CMat {
    let [nx, ny, nz] = axis.direction();
    let s = axis.strength();
    let mut op = pauli_x().map(|z| z * nx);
    op += pauli_y().map(|z| z * ny);
    op += pauli_z().map(|z| z * nz);
    op.map(|z| z * s)
}

/// SU(2) rotation taking a traceless Hermitian one-qubit operator to its
/// canonical diagonal form: returns (u, s) with u s_op u† = s sigma_z,
/// det(u) = 1, and s the positive eigenvalue.
pub fn su2_canonicalize(s_op: &CMat) -> Result<(CMat, f64)> {
    if s_op.nrows() != 2 || s_op.ncols() != 2 {
        return Err(Error::Validation(format!(
            "su2_canonicalize expects a 2x2 operator, got {}x{}",
            s_op.nrows(),
            s_op.ncols()
        )));
    }
    if !is_hermitian(s_op) {
        return Err(Error::Validation(
            "su2_canonicalize expects a Hermitian operator".to_string(),
        ));
    }
    let scale = max_abs(s_op);
    if scale <= 1e-14 {
        return Err(Error::Validation(
            "su2_canonicalize expects a nonzero operator".to_string(),
        ));
    }
    if s_op.trace().norm() > 1e-10 * (1.0 + scale) {
        return Err(Error::Validation(
            "su2_canonicalize expects a traceless operator".to_string(),
        ));
    }
    let decomp = crate::linalg::hermitian_eig(s_op)?;
    let s = decomp.eigenvalues[1];
    // Rows of u are the bra vectors of the +s and -s eigenstates.
    let plus = decomp.vectors.column(1);
    let minus = decomp.vectors.column(0);
    let mut u = CMat::zeros(2, 2);
    for j in 0..2 {
        u[(0, j)] = plus[j].conj();
        u[(1, j)] = minus[j].conj();
    }
    // Rotate the global phase so det(u) = 1.
    let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
    let phase = cplx(0.0, -det.arg() / 2.0).exp();
    Ok((u.map(|z| z * phase), s))
}

/// Tensor product of the per-qubit canonicalization rotations; conjugating
/// by this unitary takes every S_l to its sigma_z form.
pub fn canonicalization_unitary(per_qubit_axes: &[AxisVector]) -> Result<CMat> {
    let factors: Vec<CMat> = per_qubit_axes
        .iter()
        .map(|axis| su2_canonicalize(&pauli_axis_op(axis)).map(|(u, _)| u))
        .collect::<Result<_>>()?;
    Ok(kron_all(&factors))
}

/// Truncated annihilation operator: a|n> = sqrt(n)|n-1> with a hard cutoff
/// at n_max levels.
pub fn annihilation_op(n_max: usize) -> CMat {
    CMat::from_fn(n_max, n_max, |r, c| {
        if c == r + 1 {
            creal((c as f64).sqrt())
        } else {
            creal(0.0)
        }
    })
}

/// Number operator a†a = diag(0, 1, ..., n_max - 1).
pub fn number_op(n_max: usize) -> CMat {
    CMat::from_fn(n_max, n_max, |r, c| {
        if r == c {
            creal(r as f64)
        } else {
            creal(0.0)
        }
    })
}

/// One truncated bosonic mode of the environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub frequency: f64,
    pub n_max: usize,
}

/// Environment description: mode frequencies/truncations plus the coupling
/// table `g[qubit][mode]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BathSpec {
    modes: Vec<BathMode>,
    couplings: Vec<Vec<f64>>,
}

impl BathSpec {
    pub fn new(modes: Vec<BathMode>, couplings: Vec<Vec<f64>>) -> Result<Self> {
        for (k, m) in modes.iter().enumerate() {
            if !m.frequency.is_finite() || m.frequency <= 0.0 {
                return Err(Error::Validation(format!(
                    "mode {k} frequency must be > 0, got {}",
                    m.frequency
                )));
            }
            if m.n_max < 2 {
                return Err(Error::Validation(format!(
                    "mode {k} truncation must be >= 2, got {}",
                    m.n_max
                )));
            }
        }
        for (l, row) in couplings.iter().enumerate() {
            if row.len() != modes.len() {
                return Err(Error::Validation(format!(
                    "coupling row {l} has {} entries for {} modes",
                    row.len(),
                    modes.len()
                )));
            }
        }
        Ok(Self { modes, couplings })
    }

    /// A bath with no modes (one-dimensional environment factor).
    pub fn empty(num_qubits: usize) -> Self {
        Self {
            modes: Vec::new(),
            couplings: vec![Vec::new(); num_qubits],
        }
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.couplings.len()
    }

    pub fn mode_dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| m.n_max).collect()
    }

    pub fn bath_dim(&self) -> usize {
        self.modes.iter().map(|m| m.n_max).product()
    }

    pub fn coupling_row(&self, qubit: usize) -> &[f64] {
        &self.couplings[qubit]
    }
}

/// Embed a 2x2 operator on qubit `l` of an `num_qubits`-qubit register.
pub fn embed_qubit_op(num_qubits: usize, l: usize, op: &CMat) -> CMat {
    let factors: Vec<CMat> = (0..num_qubits)
        .map(|q| {
            if q == l {
                op.clone()
            } else {
                CMat::identity(2, 2)
            }
        })
        .collect();
    kron_all(&factors)
}

/// Embed a single-mode operator on mode `k` of the bath factor.
pub fn embed_mode_op(mode_dims: &[usize], k: usize, op: &CMat) -> CMat {
    let factors: Vec<CMat> = mode_dims
        .iter()
        .enumerate()
        .map(|(m, &d)| {
            if m == k {
                op.clone()
            } else {
                CMat::identity(d, d)
            }
        })
        .collect();
    kron_all(&factors)
}

/// Weighted position coupling Σ_k w_k (a_k + a_k†) on the full bath space.
pub fn bath_position_coupling(bath: &BathSpec, weights: &[f64]) -> CMat {
    let dims = bath.mode_dims();
    let dim = bath.bath_dim();
    let mut op = CMat::zeros(dim, dim);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let a = annihilation_op(dims[k]);
        let x = (&a + a.adjoint()).map(|z| z * w);
        op += embed_mode_op(&dims, k, &x);
    }
    op
}

/// Free bath Hamiltonian Σ_k omega_k a_k†a_k.
pub fn bath_free_op(bath: &BathSpec) -> CMat {
    let dims = bath.mode_dims();
    let dim = bath.bath_dim();
    let mut op = CMat::zeros(dim, dim);
    for (k, mode) in bath.modes().iter().enumerate() {
        op += embed_mode_op(&dims, k, &number_op(mode.n_max)).map(|z| z * mode.frequency);
    }
    op
}

/// Complex coupling amplitudes indexed by (qubit, generator, mode); entry
/// c defines the Hermitian term sigma_l^alpha ⊗ (c a_k + conj(c) a_k†).
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCouplingSpec {
    num_qubits: usize,
    num_modes: usize,
    amplitudes: Vec<Complex64>,
}

impl GeneralCouplingSpec {
    pub fn new(num_qubits: usize, num_modes: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != num_qubits * 3 * num_modes {
            return Err(Error::Validation(format!(
                "amplitude table has {} entries, expected {}",
                amplitudes.len(),
                num_qubits * 3 * num_modes
            )));
        }
        Ok(Self {
            num_qubits,
            num_modes,
            amplitudes,
        })
    }

    pub fn from_fn(
        num_qubits: usize,
        num_modes: usize,
        mut f: impl FnMut(usize, PauliAxis, usize) -> Complex64,
    ) -> Self {
        let mut amplitudes = Vec::with_capacity(num_qubits * 3 * num_modes);
        for l in 0..num_qubits {
            for axis in PauliAxis::ALL {
                for k in 0..num_modes {
                    let _ = l;
                    amplitudes.push(f(l, axis, k));
                }
            }
        }
        Self {
            num_qubits,
            num_modes,
            amplitudes,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn amplitude(&self, l: usize, axis: PauliAxis, k: usize) -> Complex64 {
        self.amplitudes[(l * 3 + axis.index()) * self.num_modes + k]
    }
}

/// One (system ⊗ bath) product term of a Hamiltonian.
#[derive(Debug, Clone)]
pub struct HamiltonianTerm {
    pub system_op: CMat,
    pub bath_op: CMat,
    pub coefficient: f64,
}

/// A structured Hamiltonian H = Σ coefficient · (system_op ⊗ bath_op) with
/// its assembled total cached.
#[derive(Debug, Clone)]
pub struct HamiltonianModel {
    layout: SystemLayout,
    terms: Vec<HamiltonianTerm>,
    total: CMat,
}

impl HamiltonianModel {
    pub fn new(layout: SystemLayout, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        let qd = layout.qubit_dim();
        let bd = layout.bath_dim();
        let total_dim = layout.total_dim();
        let mut total = CMat::zeros(total_dim, total_dim);
        for (i, term) in terms.iter().enumerate() {
            if term.system_op.nrows() != qd || term.system_op.ncols() != qd {
                return Err(Error::Shape(format!(
                    "term {i}: system operator is {}x{} but the qubit space has dimension {qd}",
                    term.system_op.nrows(),
                    term.system_op.ncols()
                )));
            }
            if term.bath_op.nrows() != bd || term.bath_op.ncols() != bd {
                return Err(Error::Shape(format!(
                    "term {i}: bath operator is {}x{} but the bath space has dimension {bd}",
                    term.bath_op.nrows(),
                    term.bath_op.ncols()
                )));
            }
            total += kron(&term.system_op, &term.bath_op).map(|z| z * term.coefficient);
        }
        if !is_hermitian(&total) {
            return Err(Error::Contract(format!(
                "assembled Hamiltonian is not Hermitian within {HERMITIAN_TOL:e}"
            )));
        }
        Ok(Self {
            layout,
            terms,
            total,
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    pub fn total(&self) -> &CMat {
        &self.total
    }

    /// Sum of two models over the same layout.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::Shape(
                "cannot add Hamiltonians over different layouts".to_string(),
            ));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::new(self.layout.clone(), terms)
    }

    /// Model with every coefficient multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| HamiltonianTerm {
                system_op: t.system_op.clone(),
                bath_op: t.bath_op.clone(),
                coefficient: t.coefficient * factor,
            })
            .collect();
        Self::new(self.layout.clone(), terms).expect("scaling preserves the model contract")
    }

    /// True when every term's bath operator is the identity.
    pub fn is_system_only(&self) -> bool {
        let bd = self.layout.bath_dim();
        let id = CMat::identity(bd, bd);
        self.terms
            .iter()
            .all(|t| max_abs(&(&t.bath_op - &id)) <= 1e-12)
    }
}

fn check_bath_matches_layout(layout: &SystemLayout, bath: &BathSpec) -> Result<()> {
    if bath.num_qubits() != layout.num_qubits() {
        return Err(Error::Validation(format!(
            "bath coupling table has {} rows for {} qubits",
            bath.num_qubits(),
            layout.num_qubits()
        )));
    }
    if bath.mode_dims() != layout.mode_dims() {
        return Err(Error::Validation(format!(
            "bath mode dimensions {:?} do not match the layout factors {:?}",
            bath.mode_dims(),
            layout.mode_dims()
        )));
    }
    Ok(())
}

/// Paired dephasing coupling: for each pair (l, l'),
/// (S_l + (1 + mismatch) S_l') ⊗ Σ_k g_lk (a_k + a_k†), plus the free bath
/// term. At mismatch = 0 each pair operator is conserved exactly.
pub fn build_dephasing_model(
    layout: &SystemLayout,
    axes: &[AxisVector],
    bath: &BathSpec,
    mismatch: f64,
) -> Result<HamiltonianModel> {
    check_bath_matches_layout(layout, bath)?;
    layout.require_fully_paired()?;
    let pairs = layout.pairing();
    if axes.len() != pairs.len() {
        return Err(Error::Validation(format!(
            "{} axes supplied for {} pairs",
            axes.len(),
            pairs.len()
        )));
    }
    let nq = layout.num_qubits();
    let mut terms = Vec::new();
    for (p, (&(l, lp), axis)) in pairs.iter().zip(axes).enumerate() {
        let row_l = bath.coupling_row(l);
        let row_lp = bath.coupling_row(lp);
        let row_gap = row_l
            .iter()
            .zip(row_lp)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if row_gap > 1e-12 {
            return Err(Error::Validation(format!(
                "pair {p} members ({l}, {lp}) have different coupling rows; \
                 strength mismatch is controlled by the mismatch parameter"
            )));
        }
        let s = pauli_axis_op(axis);
        let system_op =
            embed_qubit_op(nq, l, &s) + embed_qubit_op(nq, lp, &s).map(|z| z * (1.0 + mismatch));
        let bath_op = bath_position_coupling(bath, row_l);
        terms.push(HamiltonianTerm {
            system_op,
            bath_op,
            coefficient: 1.0,
        });
    }
    if bath.num_modes() > 0 {
        terms.push(HamiltonianTerm {
            system_op: CMat::identity(layout.qubit_dim(), layout.qubit_dim()),
            bath_op: bath_free_op(bath),
            coefficient: 1.0,
        });
    }
    HamiltonianModel::new(layout.clone(), terms)
}

/// General qubit-boson coupling: Σ_{l,alpha,k} sigma_l^alpha ⊗
/// (c a_k + conj(c) a_k†), plus the free bath term. Hermitian by
/// construction for any amplitude table.
pub fn build_general_model(
    layout: &SystemLayout,
    spec: &GeneralCouplingSpec,
    bath: &BathSpec,
) -> Result<HamiltonianModel> {
    check_bath_matches_layout(layout, bath)?;
    if spec.num_qubits() != layout.num_qubits() || spec.num_modes() != bath.num_modes() {
        return Err(Error::Validation(format!(
            "coupling table is {} qubits x {} modes, layout has {} qubits and {} modes",
            spec.num_qubits(),
            spec.num_modes(),
            layout.num_qubits(),
            bath.num_modes()
        )));
    }
    let nq = layout.num_qubits();
    let mode_dims = bath.mode_dims();
    let mut terms = Vec::new();
    for l in 0..nq {
        for axis in PauliAxis::ALL {
            for k in 0..bath.num_modes() {
                let c = spec.amplitude(l, axis, k);
                if c.norm() == 0.0 {
                    continue;
                }
                let a = annihilation_op(mode_dims[k]);
                let mode_op = a.map(|z| z * c) + a.adjoint().map(|z| z * c.conj());
                terms.push(HamiltonianTerm {
                    system_op: embed_qubit_op(nq, l, &axis.matrix()),
                    bath_op: embed_mode_op(&mode_dims, k, &mode_op),
                    coefficient: 1.0,
                });
            }
        }
    }
    if bath.num_modes() > 0 {
        terms.push(HamiltonianTerm {
            system_op: CMat::identity(layout.qubit_dim(), layout.qubit_dim()),
            bath_op: bath_free_op(bath),
            coefficient: 1.0,
        });
    }
    HamiltonianModel::new(layout.clone(), terms)
}

/// Free qubit Hamiltonian H_S = Σ_l (omega_l / 2) sigma_z^l (bath factor
/// untouched).
pub fn free_qubit_hamiltonian(
    layout: &SystemLayout,
    frequencies: &[f64],
) -> Result<HamiltonianModel> {
    let nq = layout.num_qubits();
    if frequencies.len() != nq {
        return Err(Error::Validation(format!(
            "{} frequencies supplied for {nq} qubits",
            frequencies.len()
        )));
    }
    let bd = layout.bath_dim();
    let terms = frequencies
        .iter()
        .enumerate()
        .map(|(l, &w)| HamiltonianTerm {
            system_op: embed_qubit_op(nq, l, &pauli_z()),
            bath_op: CMat::identity(bd, bd),
            coefficient: 0.5 * w,
        })
        .collect();
    HamiltonianModel::new(layout.clone(), terms)
}

/// Drive H_drv = -(1 - mistune) H_sys cancelling a system-only Hamiltonian;
/// at mistune = 0 the cancellation is exact, at mistune = 1 the drive
/// vanishes.
pub fn build_fhe_drive(h_sys: &HamiltonianModel, mistune: f64) -> Result<HamiltonianModel> {
    if !h_sys.is_system_only() {
        return Err(Error::Validation(
            "drive construction requires a system-only Hamiltonian (identity bath action)"
                .to_string(),
        ));
    }
    Ok(h_sys.scaled(-(1.0 - mistune)))
}
