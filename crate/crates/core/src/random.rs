//! Seeded random states and separable densities.
//!
//! Every random quantity is drawn from a ChaCha stream selected by
//! (seed, stream index), so results do not depend on scheduling.

use alloc::vec::Vec;

use nalgebra::DMatrix;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::Result;
use crate::linalg;
use crate::quantum::{separable_mixture, DensityTensor};
use crate::tensor::{Field, Shape, Tensor};
use crate::C64;

pub type StreamRng = ChaCha8Rng;

/// Independent generator number `stream` derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard Gaussian over ℝ, or independent N(0, 1/2) real and imaginary parts over ℂ.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, field: Field) -> C64 {
    match field {
        Field::Real => C64::new(StandardNormal.sample(rng), 0.0),
        Field::Complex => {
            let s = core::f64::consts::FRAC_1_SQRT_2;
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re * s, im * s)
        }
    }
}

/// Uniformly distributed unit vector of length `n`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> Vec<C64> {
    loop {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng, field)).collect();
        if linalg::normalize(&mut v) > 1e-300 {
            return v;
        }
    }
}

/// Orthonormal (unitary over ℂ) n × n matrix: the Q factor of a Gaussian matrix.
pub fn random_orthonormal_basis<R: Rng + ?Sized>(rng: &mut R, n: usize, field: Field) -> DMatrix<C64> {
    loop {
        let g = DMatrix::from_fn(n, n, |_, _| gaussian(rng, field));
        let qr = g.qr();
        if qr.r().diagonal().iter().all(|z| z.norm() > 1e-8) {
            return qr.q();
        }
    }
}

/// Gaussian tensor normalized to unit Hilbert-Schmidt norm.
pub fn random_state<R: Rng + ?Sized>(shape: &Shape, field: Field, rng: &mut R) -> Tensor {
    let mut data: Vec<C64> = (0..shape.total_size()).map(|_| gaussian(rng, field)).collect();
    while linalg::normalize(&mut data) == 0.0 {
        data = (0..shape.total_size()).map(|_| gaussian(rng, field)).collect();
    }
    Tensor::new(shape.clone(), field, data).expect("entries match the field")
}

/// Σᵢ pᵢ ⊗ⱼ(x_{j,i} ⊗ conj x_{j,i}) with r ∈ [1, 2∏nⱼ] random terms, positive
/// weights summing to one and random unit vectors.
pub fn random_separable_density<R: Rng + ?Sized>(base: &Shape, field: Field, rng: &mut R) -> Result<DensityTensor> {
    let r = rng.random_range(1..=2 * base.total_size());
    let mut probs: Vec<f64> = (0..r).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|p| *p /= total);
    let states: Vec<Tensor> = (0..r)
        .map(|_| {
            let factors: Vec<Vec<C64>> = base.dims().iter().map(|&n| random_unit_vector(rng, n, field)).collect();
            Tensor::outer(field, &factors)
        })
        .collect::<Result<_>>()?;
    separable_mixture(&probs, &states)
}
