//! Paired-qubit encoding: collective pair operators, the null-eigenspace
//! code they define, and the four-qubit singlet code immune to collective
//! coupling along every axis.

use crate::error::{Error, Result};
use crate::linalg::{
    creal, is_hermitian, kernel_basis, kron, CMat, CVec, SystemLayout, KERNEL_TOL,
};
use crate::model::{embed_qubit_op, pauli_axis_op, pauli_x, pauli_y, pauli_z, AxisVector};

/// Collective operator of one pair: S ⊗ I + (1 + mismatch) I ⊗ S. At
/// mismatch = 0 its spectrum is {2s, 0, 0, -2s} and the two-dimensional
/// kernel carries one logical qubit.
pub fn pair_operator(axis: &AxisVector, mismatch: f64) -> CMat {
    let s = pauli_axis_op(axis);
    let id = CMat::identity(2, 2);
    kron(&s, &id) + kron(&id, &s).map(|z| z * (1.0 + mismatch))
}

/// The pair operators of a register, one per pair.
#[derive(Debug, Clone)]
pub struct PairOperatorSet {
    operators: Vec<CMat>,
    mismatch: f64,
    axes: Vec<AxisVector>,
}

impl PairOperatorSet {
    pub fn new(axes: Vec<AxisVector>, mismatch: f64) -> Self {
        let operators = axes.iter().map(|a| pair_operator(a, mismatch)).collect();
        Self {
            operators,
            mismatch,
            axes,
        }
    }

    pub fn operators(&self) -> &[CMat] {
        &self.operators
    }

    pub fn mismatch(&self) -> f64 {
        self.mismatch
    }

    pub fn axes(&self) -> &[AxisVector] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Pair operators embedded on the full qubit register.
    pub fn embedded(&self, layout: &SystemLayout) -> Result<Vec<CMat>> {
        if layout.pairing().len() != self.len() {
            return Err(Error::Validation(format!(
                "{} pair operators for {} pairs in the layout",
                self.len(),
                layout.pairing().len()
            )));
        }
        let nq = layout.num_qubits();
        Ok(layout
            .pairing()
            .iter()
            .zip(&self.axes)
            .map(|(&(l, lp), axis)| {
                let s = pauli_axis_op(axis);
                embed_qubit_op(nq, l, &s)
                    + embed_qubit_op(nq, lp, &s).map(|z| z * (1.0 + self.mismatch))
            })
            .collect())
    }
}

/// Isometry from the logical space into the physical qubit register.
#[derive(Debug, Clone)]
pub struct CodeSpace {
    isometry: CMat,
    logical_dim: usize,
    basis_labels: Vec<String>,
}

impl CodeSpace {
    pub fn new(isometry: CMat, basis_labels: Vec<String>) -> Result<Self> {
        let logical_dim = isometry.ncols();
        if basis_labels.len() != logical_dim {
            return Err(Error::Validation(format!(
                "{} labels for {logical_dim} logical basis states",
                basis_labels.len()
            )));
        }
        let gram = isometry.adjoint() * &isometry;
        if (gram - CMat::identity(logical_dim, logical_dim)).norm()
            > 1e-12 * (logical_dim as f64).sqrt().max(1.0)
        {
            return Err(Error::Contract(
                "code isometry columns are not orthonormal".to_string(),
            ));
        }
        Ok(Self {
            isometry,
            logical_dim,
            basis_labels,
        })
    }

    /// Trivial code: logical space = physical space.
    pub fn identity(dim: usize) -> Self {
        Self {
            isometry: CMat::identity(dim, dim),
            logical_dim: dim,
            basis_labels: (0..dim).map(|i| i.to_string()).collect(),
        }
    }

    pub fn isometry(&self) -> &CMat {
        &self.isometry
    }

    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    pub fn physical_dim(&self) -> usize {
        self.isometry.nrows()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    /// Projector onto the code space.
    pub fn projector(&self) -> CMat {
        &self.isometry * self.isometry.adjoint()
    }
}

/// Sort kernel columns by the canonical index of their dominant component
/// so the logical basis order is reproducible.
fn order_by_dominant_component(basis: &CMat) -> Vec<CVec> {
    let mut cols: Vec<CVec> = (0..basis.ncols())
        .map(|c| CVec::from(basis.column(c)))
        .collect();
    cols.sort_by_key(|v| {
        let mut best = 0usize;
        let mut best_mag = 0.0f64;
        for (i, z) in v.iter().enumerate() {
            let m = z.norm();
            if m > best_mag + 1e-12 {
                best_mag = m;
                best = i;
            }
        }
        best
    });
    cols
}

/// Build the code space as the tensor product of the per-pair kernels.
/// Logical basis state `b` (bits ordered by the pairing list, most
/// significant first) maps to the product of kernel vector `b_p` of each
/// pair.
pub fn code_space(pair_ops: &PairOperatorSet, layout: &SystemLayout) -> Result<CodeSpace> {
    layout.require_fully_paired()?;
    let pairs = layout.pairing();
    if pair_ops.len() != pairs.len() {
        return Err(Error::Validation(format!(
            "{} pair operators for {} pairs",
            pair_ops.len(),
            pairs.len()
        )));
    }
    if pairs.is_empty() {
        return Err(Error::Validation("no pairs to encode into".to_string()));
    }

    let mut kernels: Vec<Vec<CVec>> = Vec::with_capacity(pairs.len());
    for (p, op) in pair_ops.operators().iter().enumerate() {
        let k = kernel_basis(op, KERNEL_TOL)?;
        if k.ncols() != 2 {
            let (low, high) = pairs[p];
            return Err(Error::CodeConstruction {
                low,
                high,
                kernel_dim: k.ncols(),
            });
        }
        kernels.push(order_by_dominant_component(&k));
    }

    let nq = layout.num_qubits();
    let physical_dim = layout.qubit_dim();
    let num_pairs = pairs.len();
    let logical_dim = 1usize << num_pairs;
    let mut isometry = CMat::zeros(physical_dim, logical_dim);

    // Enumerate all per-pair local basis indices (0..4 each); qubit l is
    // the first slot of its pair's 4-dimensional space.
    for logical in 0..logical_dim {
        for combo in 0..(4usize.pow(num_pairs as u32)) {
            let mut amp = creal(1.0);
            let mut global = 0usize;
            let mut rem = combo;
            for p in (0..num_pairs).rev() {
                let local = rem % 4;
                rem /= 4;
                let bit = (logical >> (num_pairs - 1 - p)) & 1;
                amp *= kernels[p][bit][local];
                let (l, lp) = pairs[p];
                global |= (local >> 1) << (nq - 1 - l);
                global |= (local & 1) << (nq - 1 - lp);
            }
            isometry[(global, logical)] += amp;
        }
    }

    let basis_labels = (0..logical_dim)
        .map(|b| format!("{b:0width$b}", width = num_pairs))
        .collect();
    CodeSpace::new(isometry, basis_labels)
}

/// Encode a logical ket through the code isometry (norm-preserving).
pub fn encode(logical: &CVec, code: &CodeSpace) -> Result<CVec> {
    if logical.len() != code.logical_dim() {
        return Err(Error::Shape(format!(
            "logical ket has dimension {}, code encodes {}",
            logical.len(),
            code.logical_dim()
        )));
    }
    Ok(code.isometry() * logical)
}

/// Result of projecting a physical ket back onto the logical space.
#[derive(Debug, Clone)]
pub struct Decoded {
    /// Renormalized logical ket; `None` when the input lies entirely
    /// outside the code space.
    pub logical: Option<CVec>,
    /// Population outside the code space, in [0, 1].
    pub leakage: f64,
}

/// Project a physical ket onto the logical space and report the leakage
/// 1 - |isometry† psi|^2.
pub fn decode(physical: &CVec, code: &CodeSpace) -> Result<Decoded> {
    if physical.len() != code.physical_dim() {
        return Err(Error::Shape(format!(
            "physical ket has dimension {}, code lives in {}",
            physical.len(),
            code.physical_dim()
        )));
    }
    let overlap = code.isometry().adjoint() * physical;
    let inside = overlap.norm_squared();
    let leakage = (1.0 - inside).clamp(0.0, 1.0);
    if leakage >= 1.0 - 1e-14 {
        return Ok(Decoded {
            logical: None,
            leakage,
        });
    }
    Ok(Decoded {
        logical: Some(overlap / creal(inside.sqrt())),
        leakage,
    })
}

/// Total-spin components J_alpha = Σ_i sigma_alpha^(i) of a register.
pub fn collective_spin_ops(num_qubits: usize) -> [CMat; 3] {
    let dim = 1usize << num_qubits;
    let mut ops = [
        CMat::zeros(dim, dim),
        CMat::zeros(dim, dim),
        CMat::zeros(dim, dim),
    ];
    for (slot, pauli) in [pauli_x(), pauli_y(), pauli_z()].iter().enumerate() {
        for q in 0..num_qubits {
            ops[slot] += embed_qubit_op(num_qubits, q, pauli);
        }
    }
    ops
}

/// The four-qubit code immune to collective coupling along every axis: the
/// simultaneous null space of J_x, J_y, J_z, which is two-dimensional and
/// encodes one logical qubit in four physical qubits.
pub fn singlet_code_4qubit() -> CodeSpace {
    let [jx, jy, jz] = collective_spin_ops(4);
    // The kernel of the positive operator J·J is exactly the intersection
    // of the three kernels.
    let casimir = &jx * &jx + &jy * &jy + &jz * &jz;
    debug_assert!(is_hermitian(&casimir));
    let basis = kernel_basis(&casimir, KERNEL_TOL).expect("Casimir operator is Hermitian");
    assert_eq!(
        basis.ncols(),
        2,
        "four-qubit total-spin-zero space must be two-dimensional"
    );
    let cols = order_by_dominant_component(&basis);
    let isometry = crate::linalg::from_columns(16, &cols);
    CodeSpace::new(isometry, vec!["0".to_string(), "1".to_string()])
        .expect("kernel basis is orthonormal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eig, kron_vec, max_abs};
    use crate::sample::{random_ket, random_unit_axis, seeded_rng};
    use proptest::prelude::*;

    #[test]
    fn pair_operator_matched_sigma_z() {
        let x = pair_operator(&AxisVector::z(1.0), 0.0);
        let expected = CMat::from_diagonal(&CVec::from_vec(vec![
            creal(2.0),
            creal(0.0),
            creal(0.0),
            creal(-2.0),
        ]));
        assert!(max_abs(&(x - expected)) < 1e-15);
    }

    #[test]
    fn pair_operator_mismatched_spectrum() {
        // Diagonal enumeration oracle: eigenvalues ±mismatch, ±(2 + mismatch).
        let x = pair_operator(&AxisVector::z(1.0), 0.1);
        let evs = hermitian_eig(&x).unwrap().eigenvalues;
        let expected = [-2.1, -0.1, 0.1, 2.1];
        for (a, b) in evs.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        assert_eq!(kernel_basis(&x, KERNEL_TOL).unwrap().ncols(), 0);
    }

    #[test]
    fn pair_operator_x_axis_spectrum() {
        let x = pair_operator(&AxisVector::new([1.0, 0.0, 0.0], 1.0).unwrap(), 0.0);
        let evs = hermitian_eig(&x).unwrap().eigenvalues;
        let expected = [-2.0, 0.0, 0.0, 2.0];
        for (a, b) in evs.iter().zip(expected) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    fn z_pair_code(num_pairs: usize) -> (CodeSpace, SystemLayout) {
        let pairing: Vec<(usize, usize)> = (0..num_pairs).map(|p| (2 * p, 2 * p + 1)).collect();
        let layout = SystemLayout::qubits_with_modes(2 * num_pairs, &[], pairing).unwrap();
        let ops = PairOperatorSet::new(vec![AxisVector::z(1.0); num_pairs], 0.0);
        (code_space(&ops, &layout).unwrap(), layout)
    }

    #[test]
    fn code_space_single_z_pair() {
        let (code, _) = z_pair_code(1);
        assert_eq!(code.logical_dim(), 2);
        let mut e01 = CVec::zeros(4);
        e01[1] = creal(1.0);
        let mut e10 = CVec::zeros(4);
        e10[2] = creal(1.0);
        assert!((CVec::from(code.isometry().column(0)) - e01).norm() < 1e-12);
        assert!((CVec::from(code.isometry().column(1)) - e10).norm() < 1e-12);
        assert_eq!(code.basis_labels(), ["0", "1"]);
    }

    #[test]
    fn code_space_two_pairs() {
        let (code, _) = z_pair_code(2);
        assert_eq!(code.logical_dim(), 4);
        assert_eq!(code.physical_dim(), 16);
        // |00_L> = |0101>: qubit bits (0,1,0,1) -> index 0b0101 = 5.
        let col = CVec::from(code.isometry().column(0));
        assert!((col[5] - creal(1.0)).norm() < 1e-12);
    }

    #[test]
    fn code_columns_annihilated_by_embedded_pair_operators() {
        let pairing = vec![(0, 1), (2, 3)];
        let layout = SystemLayout::qubits_with_modes(4, &[], pairing).unwrap();
        let axes = vec![
            AxisVector::new([1.0, 0.0, 1.0], 1.0).unwrap(),
            AxisVector::z(0.7),
        ];
        let ops = PairOperatorSet::new(axes, 0.0);
        let code = code_space(&ops, &layout).unwrap();
        for x in ops.embedded(&layout).unwrap() {
            assert!((x * code.isometry()).norm() <= KERNEL_TOL * 4.0);
        }
    }

    #[test]
    fn code_space_crossed_pairing() {
        // Pairs (0,2) and (1,3): |0_L 0_L> puts bit 1 on qubits 2 and 3.
        let layout = SystemLayout::qubits_with_modes(4, &[], vec![(0, 2), (1, 3)]).unwrap();
        let ops = PairOperatorSet::new(vec![AxisVector::z(1.0); 2], 0.0);
        let code = code_space(&ops, &layout).unwrap();
        let col = CVec::from(code.isometry().column(0));
        assert!((col[0b0011] - creal(1.0)).norm() < 1e-12);
    }

    #[test]
    fn code_space_rejects_mismatched_pairs() {
        let layout = SystemLayout::qubits_with_modes(2, &[], vec![(0, 1)]).unwrap();
        let ops = PairOperatorSet::new(vec![AxisVector::z(1.0)], 0.05);
        match code_space(&ops, &layout) {
            Err(Error::CodeConstruction {
                low,
                high,
                kernel_dim,
            }) => {
                assert_eq!((low, high, kernel_dim), (0, 1, 0));
            }
            other => panic!("expected code construction error, got {other:?}"),
        }
    }

    #[test]
    fn encode_selects_columns() {
        let (code, _) = z_pair_code(1);
        let zero_l = CVec::from_vec(vec![creal(1.0), creal(0.0)]);
        let physical = encode(&zero_l, &code).unwrap();
        assert!((physical[1] - creal(1.0)).norm() < 1e-12);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus_l = CVec::from_vec(vec![creal(s), creal(s)]);
        let phys = encode(&plus_l, &code).unwrap();
        assert!((phys[1] - creal(s)).norm() < 1e-12);
        assert!((phys[2] - creal(s)).norm() < 1e-12);
    }

    #[test]
    fn decode_round_trip_and_leakage() {
        let (code, _) = z_pair_code(1);
        let mut rng = seeded_rng(9);
        let psi = random_ket(&mut rng, 2);
        let decoded = decode(&encode(&psi, &code).unwrap(), &code).unwrap();
        assert!(decoded.leakage < 1e-12);
        assert!((decoded.logical.unwrap() - psi).norm() < 1e-12);

        // |00> is orthogonal to the kernel.
        let mut e00 = CVec::zeros(4);
        e00[0] = creal(1.0);
        let outside = decode(&e00, &code).unwrap();
        assert!(outside.logical.is_none());
        assert!((outside.leakage - 1.0).abs() < 1e-14);

        // Half in, half out.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut half = CVec::zeros(4);
        half[0] = creal(s);
        half[1] = creal(s);
        let d = decode(&half, &code).unwrap();
        assert!((d.leakage - 0.5).abs() < 1e-12);
    }

    #[test]
    fn singlet_code_dimension_by_brute_force_intersection() {
        // Independent route: intersect the three kernels via the sum of
        // complement projectors (kernel of Σ (I - P_alpha)).
        let [jx, jy, jz] = collective_spin_ops(4);
        let id = CMat::identity(16, 16);
        let mut m = CMat::zeros(16, 16);
        for j in [&jx, &jy, &jz] {
            let k = kernel_basis(j, KERNEL_TOL).unwrap();
            let p = &k * k.adjoint();
            m += &id - p;
        }
        let intersection = kernel_basis(&m, KERNEL_TOL).unwrap();
        assert_eq!(intersection.ncols(), 2);

        let code = singlet_code_4qubit();
        assert_eq!(code.logical_dim(), 2);
    }

    #[test]
    fn singlet_code_contains_product_of_singlets() {
        let code = singlet_code_4qubit();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = CVec::from_vec(vec![creal(0.0), creal(s), creal(-s), creal(0.0)]);
        let product = kron_vec(&singlet, &singlet);
        let d = decode(&product, &code).unwrap();
        assert!(d.leakage <= 1e-12, "leakage {}", d.leakage);
    }

    #[test]
    fn singlet_code_annihilated_by_collective_ops() {
        let code = singlet_code_4qubit();
        let [jx, jy, jz] = collective_spin_ops(4);
        for j in [jx, jy, jz] {
            assert!((j * code.isometry()).norm() <= 1e-11);
        }
    }

    #[test]
    fn singlet_code_annihilated_along_random_axes() {
        let code = singlet_code_4qubit();
        let [jx, jy, jz] = collective_spin_ops(4);
        let mut rng = seeded_rng(20);
        for _ in 0..20 {
            let axis = random_unit_axis(&mut rng, 1.0);
            let [nx, ny, nz] = axis.direction();
            let j = jx.map(|z| z * nx) + jy.map(|z| z * ny) + jz.map(|z| z * nz);
            assert!((j * code.isometry()).norm() <= 1e-10);
        }
    }

    #[test]
    fn code_subspace_invariant_under_joint_rotation() {
        // Rotating both pair members by the canonicalizing SU(2) element
        // maps the generic-axis code onto the sigma_z code.
        let axis = AxisVector::new([1.0, 2.0, 3.0], 1.3).unwrap();
        let layout = SystemLayout::qubits_with_modes(2, &[], vec![(0, 1)]).unwrap();
        let generic = code_space(&PairOperatorSet::new(vec![axis], 0.0), &layout).unwrap();
        let z_code = code_space(
            &PairOperatorSet::new(vec![AxisVector::z(1.3)], 0.0),
            &layout,
        )
        .unwrap();
        let (u, _) = crate::model::su2_canonicalize(&pauli_axis_op(&axis)).unwrap();
        let uu = kron(&u, &u);
        let rotated = &uu * generic.projector() * uu.adjoint();
        assert!((rotated - z_code.projector()).norm() <= 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn prop_encode_preserves_inner_products(seed in 0u64..500) {
            let mut rng = seeded_rng(seed);
            let (code, _) = z_pair_code(2);
            let phi = random_ket(&mut rng, 4);
            let psi = random_ket(&mut rng, 4);
            let ephi = encode(&phi, &code).unwrap();
            let epsi = encode(&psi, &code).unwrap();
            let before = phi.dotc(&psi);
            let after = ephi.dotc(&epsi);
            prop_assert!((before - after).norm() <= 1e-12);
        }

        #[test]
        fn prop_pair_kernel_dimension(seed in 0u64..500, mismatched in proptest::bool::ANY) {
            let mut rng = seeded_rng(seed);
            let axis = random_unit_axis(&mut rng, 1.0);
            let eps = if mismatched { 1e-3 } else { 0.0 };
            let op = pair_operator(&axis, eps);
            let k = kernel_basis(&op, KERNEL_TOL).unwrap();
            prop_assert_eq!(k.ncols(), if mismatched { 0 } else { 2 });
        }
    }
}
