//! Seeded random inputs for property tests and scenario sweeps.
//!
//! Everything routes through a counter-based ChaCha stream so a (seed,
//! draw-order) pair fully determines the output on every platform.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{cplx, CMat};
use crate::model::{AxisVector, GeneralCouplingSpec};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for point `index` of a sweep run under `seed`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Random Hermitian matrix (A + A†)/2 with Gaussian entries of the given
/// scale.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize, scale: f64) -> CMat {
    let raw = CMat::from_fn(dim, dim, |_, _| {
        cplx(scale * normal(rng), scale * normal(rng))
    });
    (&raw + raw.adjoint()).map(|z| z * 0.5)
}

/// Random complex ket of unit norm.
pub fn random_ket(rng: &mut impl Rng, dim: usize) -> crate::linalg::CVec {
    let raw = crate::linalg::CVec::from_fn(dim, |_, _| cplx(normal(rng), normal(rng)));
    let n = raw.norm();
    raw / Complex64::new(n, 0.0)
}

/// Uniformly random direction on the sphere with the given strength.
pub fn random_unit_axis(rng: &mut impl Rng, strength: f64) -> AxisVector {
    loop {
        let v = [normal(rng), normal(rng), normal(rng)];
        if let Ok(axis) = AxisVector::new(v, strength) {
            return axis;
        }
    }
}

/// Dense random coupling table with complex Gaussian amplitudes.
pub fn random_coupling_spec(
    rng: &mut impl Rng,
    num_qubits: usize,
    num_modes: usize,
    scale: f64,
) -> GeneralCouplingSpec {
    GeneralCouplingSpec::from_fn(num_qubits, num_modes, |_, _, _| {
        cplx(scale * normal(rng), scale * normal(rng))
    })
}
