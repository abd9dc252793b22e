//! Spectral-norm lower bounds by multistart alternating power iteration.
//!
//! ‖𝒯‖_{∞,𝔽} = max |⟨𝒯, x₁⊗…⊗x_d⟩| over unit xⱼ ∈ 𝔽^{nⱼ}. Each restart
//! cycles through the modes, replacing xₖ by the normalized contraction of 𝒯
//! with the conjugates of the other factors; this never decreases the
//! objective. The value returned is always the inner product of 𝒯 with the
//! returned witness, so it is a certified lower bound.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::random::{random_unit_vector, stream_rng};
use crate::sym::SymTensor;
use crate::tensor::{Field, RankOneTerm, Tensor};
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { restarts: 30, max_iter: 500, tol: 1e-10, seed: 0 }
    }
}

#[derive(Clone, Debug)]
pub struct SpectralResult {
    pub value: f64,
    pub witness: RankOneTerm,
    /// Restart that produced the witness.
    pub best_restart: usize,
    pub restarts_used: usize,
    pub converged: bool,
}

/// g = 𝒯 contracted with conj(xⱼ) on every mode j ≠ k.
fn contract_except(t: &Tensor, xs: &[Vec<C64>], k: usize) -> Vec<C64> {
    let dims = t.dims();
    let d = dims.len();
    let mut g = vec![C64::new(0.0, 0.0); dims[k]];
    let mut idx = vec![0usize; d];
    for &v in t.entries() {
        if v.re != 0.0 || v.im != 0.0 {
            let mut w = v;
            for j in 0..d {
                if j != k {
                    w *= xs[j][idx[j]].conj();
                }
            }
            g[idx[k]] += w;
        }
        for j in (0..d).rev() {
            idx[j] += 1;
            if idx[j] < dims[j] {
                break;
            }
            idx[j] = 0;
        }
    }
    g
}

/// ⟨𝒯, x₁⊗…⊗x_d⟩.
pub fn rank_one_inner(t: &Tensor, xs: &[Vec<C64>]) -> C64 {
    if t.order() == 0 {
        return t.entries()[0];
    }
    let g = contract_except(t, xs, 0);
    linalg::dot(&g, &xs[0])
}

fn real_phase(v: &mut [C64]) {
    // rotate so the largest entry is real positive, then drop imaginary parts
    if let Some(big) = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())) {
        if big.norm() > 0.0 {
            let p = big.conj() / big.norm();
            v.iter_mut().for_each(|z| *z *= p);
        }
    }
    v.iter_mut().for_each(|z| z.im = 0.0);
    if linalg::normalize(v) == 0.0 {
        v[0] = C64::new(1.0, 0.0);
    }
}

fn hosvd_start(t: &Tensor, field: Field) -> Result<Vec<Vec<C64>>> {
    (0..t.order())
        .map(|k| {
            let s = linalg::svd(&t.unfold(k)?);
            let mut u: Vec<C64> = s.u.column(0).iter().copied().collect();
            if field == Field::Real {
                real_phase(&mut u);
            }
            Ok(u)
        })
        .collect()
}

/// Runs alternating power iteration from `start`. Returns the final factors
/// and the objective after every sweep (index 0 is the start).
pub fn power_iteration(
    t: &Tensor,
    field: Field,
    start: Vec<Vec<C64>>,
    max_iter: usize,
    tol: f64,
) -> (Vec<Vec<C64>>, Vec<f64>, bool) {
    let d = t.order();
    let mut xs = start;
    for x in &mut xs {
        linalg::normalize(x);
    }
    let mut trace = vec![rank_one_inner(t, &xs).norm()];
    let mut converged = false;
    for _ in 0..max_iter {
        let mut value = 0.0;
        for k in 0..d {
            let mut g = contract_except(t, &xs, k);
            if field == Field::Real {
                g.iter_mut().for_each(|z| z.im = 0.0);
            }
            let ng = linalg::normalize(&mut g);
            if ng > 0.0 {
                xs[k] = g;
                value = ng;
            } else {
                value = 0.0;
            }
        }
        let prev = *trace.last().expect("nonempty");
        trace.push(value);
        if (value - prev).abs() <= tol * value.max(1e-300) {
            converged = true;
            break;
        }
    }
    (xs, trace, converged)
}

fn finish(t: &Tensor, field: Field, mut xs: Vec<Vec<C64>>) -> (f64, RankOneTerm) {
    let f = rank_one_inner(t, &xs);
    if f.norm() > 0.0 && !xs.is_empty() {
        let phase = match field {
            Field::Real => C64::new(f.re.signum(), 0.0),
            Field::Complex => f / f.norm(),
        };
        xs[0].iter_mut().for_each(|z| *z *= phase);
    }
    let value = rank_one_inner(t, &xs).norm();
    (value, RankOneTerm { factors: xs })
}

fn matrix_case(t: &Tensor, field: Field) -> (f64, RankOneTerm) {
    let (rows, cols) = (t.dims()[0], t.dims()[1]);
    let (u, y) = match field {
        Field::Real => {
            let m = DMatrix::from_fn(rows, cols, |i, j| t.entries()[i * cols + j].re);
            let svd = m.svd(true, true);
            let best = svd.singular_values.imax();
            let u = svd.u.expect("requested").column(best).iter().map(|&x| C64::new(x, 0.0)).collect();
            let y = svd.v_t.expect("requested").row(best).iter().map(|&x| C64::new(x, 0.0)).collect();
            (u, y)
        }
        Field::Complex => {
            let m = t.unfold(0).expect("order two");
            let s = linalg::svd(&m);
            let u = s.u.column(0).iter().copied().collect();
            let y = s.v_t.row(0).iter().copied().collect();
            (u, y)
        }
    };
    finish(t, field, vec![u, y])
}

pub fn spectral_lower(t: &Tensor, field: Field, opts: &SpectralOptions) -> Result<SpectralResult> {
    t.require_field(field)?;
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    if opts.restarts == 0 || opts.max_iter == 0 {
        return Err(Error::InvalidOptions("restarts and iterations must be positive"));
    }
    match t.order() {
        0 => {
            let v = t.entries()[0].norm();
            return Ok(SpectralResult {
                value: v,
                witness: RankOneTerm { factors: Vec::new() },
                best_restart: 0,
                restarts_used: 1,
                converged: true,
            });
        }
        1 | 2 => {
            let (value, witness) = if t.order() == 1 {
                let mut x = t.entries().to_vec();
                linalg::normalize(&mut x);
                finish(t, field, vec![x])
            } else {
                matrix_case(t, field)
            };
            return Ok(SpectralResult { value, witness, best_restart: 0, restarts_used: 1, converged: true });
        }
        _ => {}
    }
    let hosvd = hosvd_start(t, field)?;
    let runs = par::map_indexed(opts.restarts, |r| {
        let start = if r == 0 {
            hosvd.clone()
        } else {
            let mut rng = stream_rng(opts.seed, r as u64);
            t.dims().iter().map(|&n| random_unit_vector(&mut rng, n, field)).collect()
        };
        let (xs, _, converged) = power_iteration(t, field, start, opts.max_iter, opts.tol);
        let (value, witness) = finish(t, field, xs);
        (value, witness, converged)
    });
    let mut best = 0;
    for (r, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = r;
        }
    }
    let converged = runs[best].2;
    let (value, witness, _) = runs.into_iter().nth(best).expect("at least one restart");
    Ok(SpectralResult { value, witness, best_restart: best, restarts_used: opts.restarts, converged })
}

/// f(x) = ⟨𝒮, ⊗ᵈx⟩ on the dense form, and its gradient g with f = ⟨g, x⟩.
fn sym_value_grad(t: &Tensor, x: &[C64]) -> (C64, Vec<C64>) {
    let d = t.order();
    let xs = vec![x.to_vec(); d];
    let g = contract_except(t, &xs, d - 1);
    (linalg::dot(&g, x), g)
}

/// Symmetric power iteration x ← normalize(p·x + γ·g) with p = f/|f| and
/// step halving whenever |f| would drop.
pub fn sym_power_iteration(
    t: &Tensor,
    field: Field,
    start: Vec<C64>,
    max_iter: usize,
    tol: f64,
) -> (Vec<C64>, Vec<f64>, bool) {
    let mut x = start;
    linalg::normalize(&mut x);
    let (mut f, mut g) = sym_value_grad(t, &x);
    let mut trace = vec![f.norm()];
    let mut converged = false;
    for _ in 0..max_iter {
        let p = if f.norm() > 0.0 { f / f.norm() } else { C64::new(1.0, 0.0) };
        let mut gamma = 0.5;
        let mut accepted = false;
        while gamma > 1e-8 {
            let mut y: Vec<C64> = x.iter().zip(&g).map(|(&xi, &gi)| p * xi + gi * gamma).collect();
            if field == Field::Real {
                y.iter_mut().for_each(|z| z.im = 0.0);
            }
            if linalg::normalize(&mut y) > 0.0 {
                let (fy, gy) = sym_value_grad(t, &y);
                if fy.norm() >= f.norm() {
                    x = y;
                    f = fy;
                    g = gy;
                    accepted = true;
                    break;
                }
            }
            gamma *= 0.5;
        }
        let prev = *trace.last().expect("nonempty");
        trace.push(f.norm());
        if !accepted || (f.norm() - prev).abs() <= tol * f.norm().max(1e-300) {
            converged = true;
            break;
        }
    }
    (x, trace, converged)
}

/// Spectral lower bound restricted to symmetric witnesses ⊗ᵈx.
pub fn sym_spectral_lower(s: &SymTensor, field: Field, opts: &SpectralOptions) -> Result<SpectralResult> {
    if field == Field::Real {
        Field::Real
            .validate(s.coeffs())
            .map_err(|_| Error::FieldMismatch("real norm requested for a tensor with complex entries"))?;
    }
    if s.is_zero() {
        return Err(Error::ZeroTensor);
    }
    if opts.restarts == 0 || opts.max_iter == 0 {
        return Err(Error::InvalidOptions("restarts and iterations must be positive"));
    }
    let t = s.densify();
    let d = s.d();
    let mut first: Vec<C64> = linalg::svd(&t.unfold(0)?).u.column(0).iter().copied().collect();
    if field == Field::Real {
        real_phase(&mut first);
    }
    let runs = par::map_indexed(opts.restarts, |r| {
        let start = if r == 0 {
            first.clone()
        } else {
            random_unit_vector(&mut stream_rng(opts.seed, r as u64), s.n(), field)
        };
        let (x, _, converged) = sym_power_iteration(&t, field, start, opts.max_iter, opts.tol);
        (x, converged)
    });
    let mut best: Option<(f64, usize, Vec<C64>, bool)> = None;
    for (r, (mut x, converged)) in runs.into_iter().enumerate() {
        let (f, _) = sym_value_grad(&t, &x);
        if f.norm() > 0.0 {
            // a d-th root of the phase makes ⟨𝒮, ⊗ᵈx⟩ real nonnegative
            let c = match field {
                Field::Complex => (f / f.norm()).powf(1.0 / d as f64),
                Field::Real => C64::new(if f.re < 0.0 && d % 2 == 1 { -1.0 } else { 1.0 }, 0.0),
            };
            x.iter_mut().for_each(|z| *z *= c);
        }
        let value = sym_value_grad(&t, &x).0.norm();
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, r, x, converged));
        }
    }
    let (value, best_restart, x, converged) = best.expect("at least one restart");
    Ok(SpectralResult {
        value,
        witness: RankOneTerm { factors: vec![x; d] },
        best_restart,
        restarts_used: opts.restarts,
        converged,
    })
}

/// η = −log₂‖𝒯‖²_∞ evaluated at the spectral lower bound, which makes the
/// returned figure an upper estimate of the geometric measure.
pub fn eta(t: &Tensor, field: Field, opts: &SpectralOptions) -> Result<f64> {
    let norm = t.hs_norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnitState { norm });
    }
    let s = spectral_lower(t, field, opts)?;
    Ok(-(s.value * s.value).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn w_state() -> Tensor {
        let s = 1.0 / 3f64.sqrt();
        let mut data = vec![c(0.0); 8];
        data[1] = c(s);
        data[2] = c(s);
        data[4] = c(s);
        Tensor::from_dims(&[2, 2, 2], Field::Real, data).unwrap()
    }

    #[test]
    fn w_spectral_is_two_thirds() {
        let r = spectral_lower(&w_state(), Field::Complex, &SpectralOptions::default()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-8);
        let inner = rank_one_inner(&w_state(), &r.witness.factors);
        assert!((inner.re - r.value).abs() < 1e-12 && inner.im.abs() < 1e-12);
    }

    #[test]
    fn product_state_has_spectral_one() {
        let x = vec![c(0.6), c(0.8)];
        let t = Tensor::outer(Field::Real, &[x.clone(), x.clone(), x]).unwrap();
        let r = spectral_lower(&t, Field::Real, &SpectralOptions::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matrix_matches_svd() {
        let t = Tensor::from_real(&[2, 3], &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0]).unwrap();
        let s = linalg::singular_values(&t.unfold(0).unwrap())[0];
        for field in [Field::Real, Field::Complex] {
            let r = spectral_lower(&t, field, &SpectralOptions::default()).unwrap();
            assert!((r.value - s).abs() < 1e-12);
            assert!((rank_one_inner(&t, &r.witness.factors).norm() - s).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_tensor_rejected() {
        let t = Tensor::from_real(&[2, 2, 2], &[0.0; 8]).unwrap();
        assert!(matches!(spectral_lower(&t, Field::Real, &SpectralOptions::default()), Err(Error::ZeroTensor)));
    }

    #[test]
    fn symmetric_w_witness_profile() {
        let s = crate::sym::sym_from_dense(&w_state()).unwrap();
        let r = sym_spectral_lower(&s, Field::Complex, &SpectralOptions::default()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-8);
        let x = &r.witness.factors[0];
        assert!((x[0].norm() - (2.0f64 / 3.0).sqrt()).abs() < 1e-4);
        assert!((x[1].norm() - (1.0f64 / 3.0).sqrt()).abs() < 1e-4);
    }
}
