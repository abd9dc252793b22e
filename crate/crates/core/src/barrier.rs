//! Log-barrier Newton method for the min-sum-of-norms program.
//!
//! Each block gets an epigraph variable tᵢ ≥ ‖yᵢ‖ and the barrier
//! −log(tᵢ² − ‖yᵢ‖²). Centering steps are equality-constrained Newton steps
//! solved through the Schur complement C·H⁻¹·Cᵀ; the inverse Hessian of the
//! cone barrier is available in closed form. A centered point yields a dual
//! feasible multiplier, so termination is by certified duality gap.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::C64;

/// The constraint C·y = b in real coordinates. Each block of y holds the
/// real parts followed by the imaginary parts (complex case only); rows of
/// b are the real parts of the complex target followed by its imaginary
/// parts.
pub(crate) struct Barrier {
    con: Constraint,
    b: DVector<f64>,
    dims: Vec<usize>,
    offsets: Vec<usize>,
    complex: bool,
}

enum Constraint {
    Dense {
        c: DMatrix<f64>,
        c_pinv: DMatrix<f64>,
    },
    /// Σᵢ yᵢ vᵢᵀ = A with the columns vᵢ of `v`; row index r·m + c.
    Outer {
        v: DMatrix<C64>,
        v_pinv: DMatrix<C64>,
        n: usize,
    },
}

pub(crate) struct Outcome {
    pub x: Vec<C64>,
    pub objective: f64,
    /// Cᵢᵀη per block for the certifying multiplier η (a subgradient at x).
    pub dual: Vec<C64>,
    /// η itself in complex target coordinates, rescaled to dual feasibility.
    pub multiplier: Vec<C64>,
    pub iterations: usize,
    pub history: Vec<f64>,
    /// Whether the duality gap (certified or central-path) met the tolerance.
    pub certified: bool,
}

const MU_FACTOR: f64 = 0.1;
/// Below this barrier weight (relative to the objective) the method stops.
const MU_FLOOR: f64 = 1e-13;
const CENTERING_STEPS: usize = 60;
/// Centering stops once half the Newton decrement is below this times mu.
const DECREMENT_TOL: f64 = 1e-3;

fn realify_into(out: &mut DVector<f64>, values: impl ExactSizeIterator<Item = C64>, complex: bool) {
    let len = values.len();
    for (k, z) in values.enumerate() {
        out[k] = z.re;
        if complex {
            out[len + k] = z.im;
        }
    }
}

impl Barrier {
    /// General constraint given by `apply`, the linear part evaluated on
    /// flattened complex blocks, and its right-hand side `target`.
    pub fn dense(dims: &[usize], complex: bool, target: &[C64], apply: impl Fn(&[C64]) -> Vec<C64>) -> Self {
        let parts = if complex { 2 } else { 1 };
        let total: usize = dims.iter().sum();
        let rows = target.len() * parts;
        let offsets = block_offsets(dims, parts);
        let cols = dims.iter().sum::<usize>() * parts;
        let mut c = DMatrix::zeros(rows, cols);
        let mut y = vec![C64::new(0.0, 0.0); total];
        let mut flat_off = 0;
        let mut column = DVector::zeros(rows);
        for (i, &d) in dims.iter().enumerate() {
            for j in 0..d {
                for p in 0..parts {
                    y[flat_off + j] = if p == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
                    realify_into(&mut column, apply(&y).into_iter(), complex);
                    c.set_column(offsets[i] + p * d + j, &column);
                    y[flat_off + j] = C64::new(0.0, 0.0);
                }
            }
            flat_off += d;
        }
        let mut b = DVector::zeros(rows);
        realify_into(&mut b, target.iter().copied(), complex);
        let c_pinv = c
            .clone()
            .pseudo_inverse(1e-12 * c.norm().max(f64::MIN_POSITIVE))
            .unwrap_or_else(|_| DMatrix::zeros(cols, rows));
        Barrier { con: Constraint::Dense { c, c_pinv }, b, dims: dims.to_vec(), offsets, complex }
    }

    /// Σᵢ yᵢ vᵢᵀ = A with vᵢ the columns of `v` (m × Q) and A given row by row.
    pub fn outer(v: &DMatrix<C64>, v_pinv: &DMatrix<C64>, rows: &[Vec<C64>], complex: bool) -> Self {
        let n = rows.len();
        let dims = vec![n; v.ncols()];
        let parts = if complex { 2 } else { 1 };
        let offsets = block_offsets(&dims, parts);
        let mut b = DVector::zeros(n * v.nrows() * parts);
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        realify_into(&mut b, flat.into_iter(), complex);
        Barrier {
            con: Constraint::Outer { v: v.clone(), v_pinv: v_pinv.clone(), n },
            b,
            dims,
            offsets,
            complex,
        }
    }

    fn rdim(&self, i: usize) -> usize {
        self.dims[i] * if self.complex { 2 } else { 1 }
    }

    fn cols(&self) -> usize {
        self.offsets.last().map_or(0, |&o| o + self.rdim(self.dims.len() - 1))
    }

    fn block_complex(&self, y: &DVector<f64>, i: usize, r: usize) -> C64 {
        let o = self.offsets[i];
        let im = if self.complex { y[o + self.dims[i] + r] } else { 0.0 };
        C64::new(y[o + r], im)
    }

    fn to_real(&self, x: &[C64]) -> DVector<f64> {
        let mut out = DVector::zeros(self.cols());
        let mut flat = 0;
        for (i, &d) in self.dims.iter().enumerate() {
            for j in 0..d {
                out[self.offsets[i] + j] = x[flat + j].re;
                if self.complex {
                    out[self.offsets[i] + d + j] = x[flat + j].im;
                }
            }
            flat += d;
        }
        out
    }

    fn to_complex(&self, y: &DVector<f64>) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.dims.iter().sum());
        for (i, &d) in self.dims.iter().enumerate() {
            for j in 0..d {
                out.push(self.block_complex(y, i, j));
            }
        }
        out
    }

    fn block<'a>(&self, y: &'a DVector<f64>, i: usize) -> nalgebra::DVectorView<'a, f64> {
        y.rows(self.offsets[i], self.rdim(i))
    }

    /// n × Q complex matrix whose columns are the blocks of y.
    fn blocks_matrix(&self, y: &DVector<f64>, n: usize) -> DMatrix<C64> {
        DMatrix::from_fn(n, self.dims.len(), |r, i| self.block_complex(y, i, r))
    }

    fn from_blocks_matrix(&self, x: &DMatrix<C64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.cols());
        for i in 0..x.ncols() {
            let o = self.offsets[i];
            for r in 0..x.nrows() {
                out[o + r] = x[(r, i)].re;
                if self.complex {
                    out[o + x.nrows() + r] = x[(r, i)].im;
                }
            }
        }
        out
    }

    /// Complex n × m matrix from a real row vector.
    fn rows_matrix(&self, nu: &DVector<f64>, n: usize, m: usize) -> DMatrix<C64> {
        let len = n * m;
        DMatrix::from_fn(n, m, |r, c| {
            let k = r * m + c;
            C64::new(nu[k], if self.complex { nu[len + k] } else { 0.0 })
        })
    }

    fn from_rows_matrix(&self, a: &DMatrix<C64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.b.len());
        let (n, m) = a.shape();
        realify_into(&mut out, (0..n * m).map(|k| a[(k / m, k % m)]), self.complex);
        out
    }

    /// C·y.
    fn apply(&self, y: &DVector<f64>) -> DVector<f64> {
        match &self.con {
            Constraint::Dense { c, .. } => c * y,
            Constraint::Outer { v, n, .. } => {
                let yb = self.blocks_matrix(y, *n);
                self.from_rows_matrix(&(yb * v.transpose()))
            }
        }
    }

    /// Cᵀ·ν.
    fn adjoint(&self, nu: &DVector<f64>) -> DVector<f64> {
        match &self.con {
            Constraint::Dense { c, .. } => c.transpose() * nu,
            Constraint::Outer { v, n, .. } => {
                let lambda = self.rows_matrix(nu, *n, v.nrows());
                self.from_blocks_matrix(&(lambda * v.map(|z| z.conj())))
            }
        }
    }

    /// Minimum-norm solution x of C·x = r.
    fn min_norm(&self, r: &DVector<f64>) -> DVector<f64> {
        match &self.con {
            Constraint::Dense { c_pinv, .. } => c_pinv * r,
            Constraint::Outer { v, v_pinv, n } => {
                let rm = self.rows_matrix(r, *n, v.nrows());
                self.from_blocks_matrix(&(rm * v_pinv.transpose()))
            }
        }
    }

    /// Cᵢ·z for a single block.
    fn block_image(&self, i: usize, z: &DVector<f64>) -> DVector<f64> {
        match &self.con {
            Constraint::Dense { c, .. } => c.columns(self.offsets[i], self.rdim(i)) * z,
            Constraint::Outer { v, n, .. } => {
                let m = v.nrows();
                let mut out = DVector::zeros(self.b.len());
                let yi: Vec<C64> = (0..*n)
                    .map(|r| C64::new(z[r], if self.complex { z[*n + r] } else { 0.0 }))
                    .collect();
                realify_into(&mut out, (0..n * m).map(|k| yi[k / m] * v[(k % m, i)]), self.complex);
                out
            }
        }
    }

    /// Σᵢ aᵢ·Cᵢ·Cᵢᵀ.
    fn weighted_gram(&self, a: &[f64]) -> DMatrix<f64> {
        match &self.con {
            Constraint::Dense { c, .. } => {
                let mut scaled = c.clone();
                for (i, &ai) in a.iter().enumerate() {
                    scaled.columns_mut(self.offsets[i], self.rdim(i)).scale_mut(ai.sqrt());
                }
                &scaled * scaled.transpose()
            }
            Constraint::Outer { v, n, .. } => {
                // Λ ↦ Λ·K with K = Σ aᵢ conj(vᵢ) vᵢᵀ, the same K on every row of Λ.
                let m = v.nrows();
                let mut weighted = v.map(|z| z.conj());
                for (i, &ai) in a.iter().enumerate() {
                    weighted.column_mut(i).scale_mut(ai);
                }
                let k = weighted * v.transpose();
                let len = n * m;
                let mut s = DMatrix::zeros(self.b.len(), self.b.len());
                for r in 0..*n {
                    for c in 0..m {
                        for c2 in 0..m {
                            let (row, col) = (r * m + c2, r * m + c);
                            let kv = k[(c, c2)];
                            s[(row, col)] = kv.re;
                            if self.complex {
                                s[(row, len + col)] = -kv.im;
                                s[(len + row, col)] = kv.im;
                                s[(len + row, len + col)] = kv.re;
                            }
                        }
                    }
                }
                s
            }
        }
    }

    /// Lower bound bᵀη/ρ, the subgradient Cᵀη/ρ and ρ, where ρ ≥ 1
    /// rescales η into the dual feasible set {‖Cᵢᵀη‖ ≤ wᵢ}.
    fn dual_bound(&self, weights: &[f64], eta: &DVector<f64>) -> (f64, DVector<f64>, f64) {
        let s = self.adjoint(eta);
        let worst = (0..self.dims.len())
            .map(|i| self.block(&s, i).norm() / weights[i])
            .fold(1.0, f64::max);
        (self.b.dot(eta) / worst, s / worst, worst)
    }

    /// Complex vector in target coordinates from its real stacking.
    fn target_complex(&self, eta: &DVector<f64>) -> Vec<C64> {
        let len = if self.complex { eta.len() / 2 } else { eta.len() };
        (0..len).map(|k| C64::new(eta[k], if self.complex { eta[len + k] } else { 0.0 })).collect()
    }

    /// Runs the barrier method from the feasible point `start`. Weights must
    /// be positive. Returns `None` if a Newton system cannot be solved or the
    /// iteration budget runs out before the gap is certified.
    pub fn solve(&self, weights: &[f64], start: &[C64], tol_rel: f64, tol_abs: f64, max_newton: usize) -> Option<Outcome> {
        let q = self.dims.len();
        let rows = self.b.len();
        let mut y = self.to_real(start);
        let objective = |y: &DVector<f64>| -> f64 {
            (0..q).map(|i| weights[i] * self.block(y, i).norm()).sum()
        };

        let f0 = objective(&y);
        let mut mu = (f0 / q as f64).max(1e-6);
        let center = |w: f64, n: f64, mu: f64| (mu + (mu * mu + w * w * n * n).sqrt()) / w;
        let mut t: Vec<f64> = (0..q).map(|i| center(weights[i], self.block(&y, i).norm(), mu)).collect();

        let mut best_y = y.clone();
        let mut best_f = f0;
        let mut history = vec![f0];
        let mut newton = 0;

        loop {
            // Centering at the current mu.
            let mut eta = DVector::zeros(rows);
            for _ in 0..CENTERING_STEPS {
                newton += 1;
                if newton > max_newton {
                    return None;
                }
                let mut u = vec![0.0; q];
                for i in 0..q {
                    let n = self.block(&y, i).norm();
                    u[i] = (t[i] - n) * (t[i] + n);
                }
                // Gradient and H⁻¹g per block; H⁻¹ = (x xᵀ − (u/2) J) / mu.
                let mut hg_t = vec![0.0; q];
                let mut hg_y = DVector::zeros(y.len());
                let mut a = vec![0.0; q];
                let mut cy = DMatrix::zeros(rows, q);
                for i in 0..q {
                    let (o, d) = (self.offsets[i], self.rdim(i));
                    let yi = self.block(&y, i);
                    let gt = weights[i] - 2.0 * mu * t[i] / u[i];
                    let gy = yi * (2.0 * mu / u[i]);
                    let xg = t[i] * gt + yi.dot(&gy);
                    hg_t[i] = (t[i] * xg - 0.5 * u[i] * gt) / mu;
                    let hy = (yi * xg + &gy * (0.5 * u[i])) / mu;
                    hg_y.rows_mut(o, d).copy_from(&hy);
                    a[i] = 0.5 * u[i] / mu;
                    cy.set_column(i, &(self.block_image(i, &yi.into_owned()) / mu.sqrt()));
                }
                // rhs = −C·(H⁻¹g)_y − (b − C·y).
                let rhs = self.apply(&(&y - &hg_y)) - &self.b;
                let mut schur = self.weighted_gram(&a) + &cy * cy.transpose();
                let reg = 1e-14 * (1.0 + schur.diagonal().amax());
                for k in 0..rows {
                    schur[(k, k)] += reg;
                }
                let nu = schur.cholesky()?.solve(&rhs);
                let ctnu = self.adjoint(&nu);

                let mut dt = vec![0.0; q];
                let mut dy = DVector::zeros(y.len());
                for i in 0..q {
                    let (o, d) = (self.offsets[i], self.rdim(i));
                    let yi = self.block(&y, i);
                    let a = ctnu.rows(o, d);
                    // H⁻¹ (0, a) = (x (yᵀa) + (u/2)(0, a)) / mu.
                    let ya = yi.dot(&a);
                    dt[i] = -hg_t[i] - t[i] * ya / mu;
                    let step = -hg_y.rows(o, d) - (yi * ya + a * (0.5 * u[i])) / mu;
                    dy.rows_mut(o, d).copy_from(&step);
                }
                eta = -nu;
                // Keep the step on the affine set despite the conditioning of
                // the Schur system near the boundary.
                let drift = self.apply(&(&y + &dy)) - &self.b;
                dy -= self.min_norm(&drift);
                let mut decrement = 0.0;
                for i in 0..q {
                    let yi = self.block(&y, i);
                    let gt = weights[i] - 2.0 * mu * t[i] / u[i];
                    decrement -= gt * dt[i] + yi.dot(&self.block(&dy, i)) * (2.0 * mu / u[i]);
                }

                if decrement * 0.5 <= DECREMENT_TOL * mu {
                    break;
                }
                let phi = |t: &[f64], y: &DVector<f64>| -> Option<f64> {
                    let mut total = 0.0;
                    for i in 0..q {
                        let n = self.block(y, i).norm();
                        let u = (t[i] - n) * (t[i] + n);
                        if !(u > 0.0) || !(t[i] > 0.0) {
                            return None;
                        }
                        total += weights[i] * t[i] - mu * u.ln();
                    }
                    Some(total)
                };
                let phi0 = phi(&t, &y)?;
                let mut alpha = 1.0;
                let mut moved = false;
                while alpha > 1e-12 {
                    let tt: Vec<f64> = (0..q).map(|i| t[i] + alpha * dt[i]).collect();
                    let yy = &y + &dy * alpha;
                    if let Some(p) = phi(&tt, &yy) {
                        if p <= phi0 - 0.25 * alpha * decrement {
                            t = tt;
                            y = yy;
                            moved = true;
                            break;
                        }
                    }
                    alpha *= 0.5;
                }
                let f = objective(&y);
                if f < best_f {
                    best_f = f;
                    best_y.copy_from(&y);
                }
                history.push(best_f);
                if !moved {
                    break;
                }
            }

            // Certified lower bound: the centering multiplier and a least-squares
            // refit of stationarity on the active blocks, each rescaled into
            // the dual feasible set {‖Cᵢᵀη‖ ≤ wᵢ}.
            let tol = tol_rel * best_f + tol_abs;
            let (lower, s, worst) = self.dual_bound(weights, &eta);
            let residual = (self.apply(&best_y) - &self.b).norm();
            // Either the rescaled multiplier certifies the gap, or the
            // central-path bound 2·Q·mu (barrier parameter 2 per cone) does.
            let certified = residual <= 1e-9 && (best_f - lower <= tol || 2.0 * q as f64 * mu <= tol);
            if certified || mu < MU_FLOOR * best_f {
                return Some(Outcome {
                    x: self.to_complex(&best_y),
                    objective: best_f,
                    dual: self.to_complex(&s),
                    multiplier: self.target_complex(&(&eta / worst)),
                    iterations: newton,
                    history,
                    certified,
                });
            }
            mu *= MU_FACTOR;
        }
    }
}

fn block_offsets(dims: &[usize], parts: usize) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(dims.len());
    let mut off = 0;
    for &d in dims {
        offsets.push(off);
        off += d * parts;
    }
    offsets
}
