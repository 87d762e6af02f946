//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Everything here works on [`CMat`]/[`CVec`] (dense, double-precision
//! complex) and stays well-conditioned up to a few thousand dimensions,
//! which covers every model in this crate. Eigenvector bases are made
//! deterministic: degenerate subspaces are re-orthonormalized by
//! Gram-Schmidt against the canonical basis order and every vector gets a
//! fixed phase convention, so repeated runs produce identical bases.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Default kernel tolerance, relative to the spectral norm. Well above
/// eigensolver noise (~1e-13) and far below the O(1) physical gaps.
pub const KERNEL_TOL: f64 = 1e-9;

/// Eigenvalues closer than this (relative to the spectral norm) are treated
/// as one degenerate cluster when canonicalizing eigenvectors.
const CLUSTER_TOL: f64 = 1e-12;

#[inline]
pub fn cplx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub fn creal(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Assemble a matrix from column vectors.
pub fn from_columns(rows: usize, cols: &[CVec]) -> CMat {
    CMat::from_fn(rows, cols.len(), |r, c| cols[c][r])
}

/// Largest entry magnitude.
pub fn max_abs(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Hermiticity test: max|A - A†| <= tol * (1 + max|A|).
pub fn is_hermitian(a: &CMat) -> bool {
    if a.nrows() != a.ncols() {
        return false;
    }
    let defect = max_abs(&(a - a.adjoint()));
    defect <= HERMITIAN_TOL * (1.0 + max_abs(a))
}

fn require_hermitian(a: &CMat, ctx: &str) -> Result<()> {
    if a.nrows() != a.ncols() {
        return Err(Error::Shape(format!(
            "{ctx}: expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !is_hermitian(a) {
        return Err(Error::Contract(format!(
            "{ctx}: matrix is not Hermitian within tolerance {HERMITIAN_TOL:e}"
        )));
    }
    Ok(())
}

/// Kronecker product a ⊗ b.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of kets.
pub fn kron_vec(a: &CVec, b: &CVec) -> CVec {
    let (n, m) = (a.len(), b.len());
    CVec::from_fn(n * m, |i, _| a[i / m] * b[i % m])
}

/// Fold a list of factors into one operator; the empty product is the 1x1
/// identity. Factor 0 is the leftmost (most significant) tensor slot.
pub fn kron_all(factors: &[CMat]) -> CMat {
    factors
        .iter()
        .fold(CMat::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// Commutator ab - ba.
pub fn commutator(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() || a.nrows() != b.nrows() {
        return Err(Error::Shape(format!(
            "commutator: expected square matrices of equal dimension, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(a * b - b * a)
}

/// Tensor-factor layout of the joint Hilbert space: qubits first, bath
/// modes last. Factor 0 is the most significant slot of the big-endian
/// basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    factor_dims: Vec<usize>,
    num_qubits: usize,
    pairing: Vec<(usize, usize)>,
}

impl SystemLayout {
    pub fn new(
        factor_dims: Vec<usize>,
        num_qubits: usize,
        pairing: Vec<(usize, usize)>,
    ) -> Result<Self> {
        if num_qubits > factor_dims.len() {
            return Err(Error::Validation(format!(
                "layout has {num_qubits} qubits but only {} factors",
                factor_dims.len()
            )));
        }
        for (i, &d) in factor_dims.iter().enumerate() {
            if i < num_qubits && d != 2 {
                return Err(Error::Validation(format!(
                    "factor {i} is a qubit and must have dimension 2, got {d}"
                )));
            }
            if d == 0 {
                return Err(Error::Validation(format!("factor {i} has dimension 0")));
            }
        }
        let mut seen = vec![false; num_qubits];
        for &(l, lp) in &pairing {
            if l >= num_qubits || lp >= num_qubits {
                return Err(Error::Validation(format!(
                    "pair ({l}, {lp}) references a qubit outside 0..{num_qubits}"
                )));
            }
            if l == lp {
                return Err(Error::Validation(format!(
                    "pair ({l}, {lp}) repeats a qubit"
                )));
            }
            for q in [l, lp] {
                if seen[q] {
                    return Err(Error::Validation(format!(
                        "qubit {q} appears in more than one pair"
                    )));
                }
                seen[q] = true;
            }
        }
        Ok(Self {
            factor_dims,
            num_qubits,
            pairing,
        })
    }

    /// Convenience: `num_qubits` qubit factors followed by the given mode
    /// dimensions.
    pub fn qubits_with_modes(
        num_qubits: usize,
        mode_dims: &[usize],
        pairing: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut dims = vec![2usize; num_qubits];
        dims.extend_from_slice(mode_dims);
        Self::new(dims, num_qubits, pairing)
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_modes(&self) -> usize {
        self.factor_dims.len() - self.num_qubits
    }

    pub fn pairing(&self) -> &[(usize, usize)] {
        &self.pairing
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn qubit_dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn bath_dim(&self) -> usize {
        self.factor_dims[self.num_qubits..].iter().product()
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.factor_dims[self.num_qubits..]
    }

    /// Indices of the qubit factors (the keep-set for reducing to the
    /// register).
    pub fn qubit_factors(&self) -> Vec<usize> {
        (0..self.num_qubits).collect()
    }

    /// Errors unless every qubit belongs to exactly one pair.
    pub fn require_fully_paired(&self) -> Result<()> {
        let mut seen = vec![false; self.num_qubits];
        for &(l, lp) in &self.pairing {
            seen[l] = true;
            seen[lp] = true;
        }
        match seen.iter().position(|s| !s) {
            Some(q) => Err(Error::Validation(format!(
                "qubit {q} is not a member of any pair"
            ))),
            None => Ok(()),
        }
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// a unitary of eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomp {
    pub eigenvalues: Vec<f64>,
    pub vectors: CMat,
}

impl SpectralDecomp {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// max |eigenvalue|.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max)
    }

    /// V diag(lambda) V†.
    pub fn reconstruct(&self) -> CMat {
        let diag = CMat::from_diagonal(&DVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&l| creal(l)),
        ));
        &self.vectors * diag * self.vectors.adjoint()
    }
}

/// Fix the phase of `v` so its largest-magnitude component is real and
/// positive. The first index attaining the maximum decides.
fn fix_phase(v: &mut CVec) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = i;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best].conj() / best_mag;
        *v *= phase;
    }
}

/// Deterministic orthonormal basis of the span of `span` (assumed
/// orthonormal): Gram-Schmidt over the projections of the canonical basis
/// vectors, taken in canonical order.
fn gs_canonical(span: &[CVec]) -> Vec<CVec> {
    let k = span.len();
    if k == 0 {
        return Vec::new();
    }
    let d = span[0].len();
    let mut accepted: Vec<CVec> = Vec::with_capacity(k);
    // A single pass almost always suffices; extra passes re-examine seeds
    // whose residual grew meaningful only after earlier acceptances.
    loop {
        let before = accepted.len();
        for j in 0..d {
            if accepted.len() == k {
                break;
            }
            // w = P e_j with P the projector onto the span.
            let mut w = CVec::zeros(d);
            for s in span {
                w += s * s[j].conj();
            }
            for _ in 0..2 {
                for u in &accepted {
                    let overlap = u.dotc(&w);
                    w -= u * overlap;
                }
            }
            let n = w.norm();
            if n > 1e-8 {
                accepted.push(w / creal(n));
            }
        }
        if accepted.len() == k || accepted.len() == before {
            break;
        }
    }
    // Unreachable for projectors of rank k, but keep the basis complete.
    if accepted.len() < k {
        for s in span {
            if accepted.len() == k {
                break;
            }
            let mut w = s.clone();
            for _ in 0..2 {
                for u in &accepted {
                    let overlap = u.dotc(&w);
                    w -= u * overlap;
                }
            }
            let n = w.norm();
            if n > 1e-10 {
                accepted.push(w / creal(n));
            }
        }
    }
    for v in &mut accepted {
        fix_phase(v);
    }
    accepted
}

/// Hermitian eigendecomposition with ascending eigenvalues and a
/// deterministic eigenvector basis.
pub fn hermitian_eig(a: &CMat) -> Result<SpectralDecomp> {
    require_hermitian(a, "hermitian_eig")?;
    let d = a.nrows();
    if d == 0 {
        return Ok(SpectralDecomp {
            eigenvalues: Vec::new(),
            vectors: CMat::zeros(0, 0),
        });
    }
    // Exact Hermitization removes the (tolerated) asymmetry before the solve.
    let ah = (a + a.adjoint()).map(|z| z * 0.5);
    let se = ah.symmetric_eigen();

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].partial_cmp(&se.eigenvalues[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut columns: Vec<CVec> = order
        .iter()
        .map(|&i| CVec::from(se.eigenvectors.column(i)))
        .collect();

    // Canonicalize degenerate clusters.
    let scale = eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let gap_tol = CLUSTER_TOL * scale;
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (eigenvalues[end] - eigenvalues[end - 1]).abs() <= gap_tol {
            end += 1;
        }
        if end - start >= 2 {
            let canon = gs_canonical(&columns[start..end]);
            columns[start..end].clone_from_slice(&canon);
        }
        start = end;
    }
    for v in &mut columns {
        fix_phase(v);
    }

    Ok(SpectralDecomp {
        eigenvalues,
        vectors: from_columns(d, &columns),
    })
}

/// Unitary evolution U = exp(-i h t), computed spectrally.
pub fn propagator(h: &CMat, t: f64) -> Result<CMat> {
    Ok(propagator_from(&hermitian_eig(h)?, t))
}

/// Propagator from a precomputed decomposition; one decomposition serves
/// all times.
pub fn propagator_from(decomp: &SpectralDecomp, t: f64) -> CMat {
    let d = decomp.dim();
    let phases = DVector::from_iterator(
        d,
        decomp
            .eigenvalues
            .iter()
            .map(|&l| (cplx(0.0, -l * t)).exp()),
    );
    &decomp.vectors * CMat::from_diagonal(&phases) * decomp.vectors.adjoint()
}

/// Partial trace of `rho` onto the factors in `keep` (kept factors stay in
/// their original order).
pub fn partial_trace(rho: &CMat, layout: &SystemLayout, keep: &[usize]) -> Result<CMat> {
    let total = layout.total_dim();
    if rho.nrows() != total || rho.ncols() != total {
        return Err(Error::Shape(format!(
            "partial_trace: density matrix is {}x{} but the layout dimension is {total}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let nf = layout.factor_dims().len();
    let mut is_kept = vec![false; nf];
    for &f in keep {
        if f >= nf {
            return Err(Error::Shape(format!(
                "partial_trace: keep index {f} is outside 0..{nf}"
            )));
        }
        if is_kept[f] {
            return Err(Error::Shape(format!(
                "partial_trace: keep index {f} is repeated"
            )));
        }
        is_kept[f] = true;
    }

    // Big-endian strides over the factor list.
    let dims = layout.factor_dims();
    let mut strides = vec![1usize; nf];
    for f in (0..nf.saturating_sub(1)).rev() {
        strides[f] = strides[f + 1] * dims[f + 1];
    }
    let kept: Vec<usize> = (0..nf).filter(|&f| is_kept[f]).collect();
    let traced: Vec<usize> = (0..nf).filter(|&f| !is_kept[f]).collect();
    let kept_dim: usize = kept.iter().map(|&f| dims[f]).product();
    let traced_dim: usize = traced.iter().map(|&f| dims[f]).product();

    // Global offset of every kept (resp. traced) multi-index.
    let offsets = |factors: &[usize], count: usize| -> Vec<usize> {
        let mut out = vec![0usize; count];
        for (idx, slot) in out.iter_mut().enumerate() {
            let mut rem = idx;
            let mut off = 0usize;
            for &f in factors.iter().rev() {
                off += (rem % dims[f]) * strides[f];
                rem /= dims[f];
            }
            *slot = off;
        }
        out
    };
    let kept_off = offsets(&kept, kept_dim);
    let traced_off = offsets(&traced, traced_dim);

    let mut out = CMat::zeros(kept_dim, kept_dim);
    for (r, &ro) in kept_off.iter().enumerate() {
        for (c, &co) in kept_off.iter().enumerate() {
            let mut acc = Complex64::default();
            for &to in &traced_off {
                acc += rho[(ro + to, co + to)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Orthonormal basis (columns) of the numerical kernel of a Hermitian
/// matrix: eigenvectors with |lambda| <= tol * max|lambda|. Deterministic
/// ordering; an empty kernel yields a d x 0 matrix.
pub fn kernel_basis(a: &CMat, tol: f64) -> Result<CMat> {
    require_hermitian(a, "kernel_basis")?;
    let decomp = hermitian_eig(a)?;
    let d = decomp.dim();
    let threshold = tol * decomp.spectral_norm();
    let selected: Vec<CVec> = decomp
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, l)| l.abs() <= threshold)
        .map(|(i, _)| CVec::from(decomp.vectors.column(i)))
        .collect();
    if selected.is_empty() {
        return Ok(CMat::zeros(d, 0));
    }
    let basis = gs_canonical(&selected);
    Ok(from_columns(d, &basis))
}
