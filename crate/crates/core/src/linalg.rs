//! Small dense linear-algebra helpers over complex scalars.

use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::C64;

pub fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Σ x · conj(y)
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn normalize(x: &mut [C64]) -> f64 {
    let n = norm(x);
    if n > 0.0 {
        x.iter_mut().for_each(|z| *z /= n);
    }
    n
}

/// Singular value decomposition with singular values sorted descending.
pub struct SortedSvd {
    pub u: DMatrix<C64>,
    pub sigma: Vec<f64>,
    pub v_t: DMatrix<C64>,
}

pub fn svd(m: &DMatrix<C64>) -> SortedSvd {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("left vectors requested");
    let v_t = svd.v_t.expect("right vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v_t = DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
    SortedSvd { u, sigma, v_t }
}

pub fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank threshold max(rows, cols) · ε · σ_max.
pub fn rank_threshold(rows: usize, cols: usize, sigma_max: f64) -> f64 {
    (rows.max(cols) as f64) * f64::EPSILON * sigma_max
}

/// Left singular vectors (sorted) and the numerical rank of `m`.
pub fn column_space(m: &DMatrix<C64>) -> (DMatrix<C64>, usize) {
    let s = svd(m);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let tol = rank_threshold(m.nrows(), m.ncols(), smax);
    let rank = s.sigma.iter().filter(|&&x| x > tol && x > 0.0).count();
    (s.u, rank)
}

/// Moore-Penrose pseudo-inverse with a relative cut-off on singular values.
pub fn pinv(m: &DMatrix<C64>, rel_cutoff: f64) -> (DMatrix<C64>, usize) {
    let s = svd(m);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let tol = rank_threshold(m.nrows(), m.ncols(), smax).max(rel_cutoff * smax);
    let rank = s.sigma.iter().filter(|&&x| x > tol && x > 0.0).count();
    let mut out = DMatrix::zeros(m.ncols(), m.nrows());
    for k in 0..rank {
        let inv = 1.0 / s.sigma[k];
        for i in 0..m.ncols() {
            let vik = s.v_t[(k, i)].conj() * inv;
            for j in 0..m.nrows() {
                out[(i, j)] += vik * s.u[(j, k)].conj();
            }
        }
    }
    (out, rank)
}

/// Eigenvalues (ascending) of a hermitian matrix; only the lower triangle is read.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Permanent of a square matrix given row-major, via Ryser's formula.
pub fn permanent(n: usize, a: &[C64]) -> C64 {
    if n == 0 {
        return C64::new(1.0, 0.0);
    }
    let mut total = C64::new(0.0, 0.0);
    let mut row_sums = alloc::vec![C64::new(0.0, 0.0); n];
    for subset in 1u32..(1u32 << n) {
        row_sums.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for col in 0..n {
            if subset & (1 << col) != 0 {
                for (row, s) in row_sums.iter_mut().enumerate() {
                    *s += a[row * n + col];
                }
            }
        }
        let prod: C64 = row_sums.iter().product();
        let sign = if (n - subset.count_ones() as usize) % 2 == 0 { 1.0 } else { -1.0 };
        total += prod * sign;
    }
    total
}
