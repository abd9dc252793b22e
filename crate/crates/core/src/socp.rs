//! Minimum weighted sum of Euclidean norms under a linear constraint.
//!
//! ```text
//! minimize   Σᵢ wᵢ ‖yᵢ‖
//! subject to Σᵢ yᵢ vᵢᵀ = A            (matrix form)
//!        or  Σᵢ Bᵢ yᵢ = b             (general block form)
//! ```
//!
//! Introducing tᵢ ≥ ‖yᵢ‖ turns this into a second-order cone program. The
//! default solver is a primal log-barrier Newton method on the cones
//! tᵢ ≥ ‖yᵢ‖, stopped by a dual certificate. When a weight is numerically
//! zero or a Newton system breaks down it falls back to ADMM: alternate the
//! Euclidean projection onto the affine set with the block soft-threshold
//! (the proximal map of Σ wᵢ‖·‖), rebalancing the penalty from the
//! primal/dual residual ratio. Complex blocks are handled in native complex
//! arithmetic, which is the same Euclidean geometry as stacking real and
//! imaginary parts.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::barrier::Barrier;
use crate::linalg;
use crate::tensor::Field;
use crate::C64;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub max_iter: usize,
    pub rho_init: f64,
    /// Zero weights are clamped up to this floor inside the solver.
    pub weight_floor: f64,
    /// Relative residual of the least-squares fit of the target above which
    /// the problem is declared infeasible.
    pub feasibility_tol: f64,
    pub method: Method,
}

/// Inner algorithm. The barrier method falls back to splitting when a
/// weight is (numerically) zero or its Newton systems break down.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Barrier,
    Splitting,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol_abs: 1e-9,
            tol_rel: 1e-7,
            max_iter: 50_000,
            rho_init: 1.0,
            weight_floor: 1e-12,
            feasibility_tol: 1e-6,
            method: Method::Barrier,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Converged,
    MaxIter,
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct MinSumNormsSolution {
    pub blocks: Vec<Vec<C64>>,
    pub objective: f64,
    /// Hilbert-Schmidt norm of the constraint residual at `blocks`.
    pub residual: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Best feasible objective after each iteration (index 0 is the start).
    pub history: Vec<f64>,
    /// Subgradient estimate of Σ wᵢ‖yᵢ‖ at the solution, one vector per block.
    pub dual: Vec<Vec<C64>>,
    /// Dual feasible multiplier Λ of the linear constraint, row-major in the
    /// target layout, with Re⟨A, Λ⟩ a lower bound on the optimum. Empty when
    /// the splitting method produced the solution.
    pub multiplier: Vec<C64>,
}

/// The matrix form: blocks yᵢ ∈ 𝔽ⁿ, fixed nonzero vᵢ ∈ 𝔽ᵐ, target A ∈ 𝔽ⁿˣᵐ.
#[derive(Clone, Debug)]
pub struct MinSumNormsProblem {
    field: Field,
    weights: Vec<f64>,
    factors: Vec<Vec<C64>>,
    target: DMatrix<C64>,
}

impl MinSumNormsProblem {
    pub fn new(field: Field, weights: Vec<f64>, factors: Vec<Vec<C64>>, target: DMatrix<C64>) -> Result<Self> {
        if weights.len() != factors.len() || factors.is_empty() {
            return Err(Error::InvalidOptions("one weight per fixed factor is required"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidOptions("weights must be finite and nonnegative"));
        }
        let m = target.ncols();
        for v in &factors {
            if v.len() != m {
                return Err(Error::ShapeMismatch { left: vec![v.len()], right: vec![m] });
            }
            if linalg::norm(v) == 0.0 {
                return Err(Error::InvalidOptions("fixed factors must be nonzero"));
            }
            field.validate(v)?;
        }
        field.validate(target.as_slice())?;
        Ok(MinSumNormsProblem { field, weights, factors, target })
    }

    pub fn block_dim(&self) -> usize {
        self.target.nrows()
    }

    pub fn num_blocks(&self) -> usize {
        self.factors.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// ‖Σ yᵢ vᵢᵀ − A‖.
    pub fn constraint_residual(&self, blocks: &[Vec<C64>]) -> f64 {
        let mut r = -self.target.clone();
        for (y, v) in blocks.iter().zip(&self.factors) {
            for (row, &yr) in y.iter().enumerate() {
                for (col, &vc) in v.iter().enumerate() {
                    r[(row, col)] += yr * vc;
                }
            }
        }
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn projector(&self, opts: &SolverOptions) -> Affine {
        let m = self.target.ncols();
        let v = DMatrix::from_fn(m, self.factors.len(), |c, i| self.factors[i][c]);
        let (v_pinv, _) = linalg::pinv(&v, opts.feasibility_tol * 1e-3);
        let rows = (0..self.target.nrows())
            .map(|r| self.target.row(r).iter().copied().collect())
            .collect();
        Affine::Outer { v, v_pinv, rows, n: self.target.nrows() }
    }

    pub fn solve(&self, opts: &SolverOptions) -> Result<MinSumNormsSolution> {
        self.solve_from(None, opts)
    }

    /// Solves starting from `start` (e.g. the current feasible point).
    pub fn solve_from(&self, start: Option<&[Vec<C64>]>, opts: &SolverOptions) -> Result<MinSumNormsSolution> {
        let dims = vec![self.block_dim(); self.num_blocks()];
        let mut sol = admm(&self.projector(opts), self.field, &dims, &self.weights, start, opts)?;
        sol.residual = self.constraint_residual(&sol.blocks);
        Ok(sol)
    }

    /// Euclidean projection of `y` onto {Σ yᵢ vᵢᵀ = A}.
    pub fn affine_project(&self, y: &[Vec<C64>]) -> Vec<Vec<C64>> {
        let dims = vec![self.block_dim(); self.num_blocks()];
        let mut flat: Vec<C64> = y.iter().flatten().copied().collect();
        self.projector(&SolverOptions::default()).project(&mut flat);
        split(&flat, &dims)
    }
}

/// The general form Σ Bᵢ yᵢ = b with Bᵢ ∈ 𝔽^{p×nᵢ}.
#[derive(Clone, Debug)]
pub struct BlockLinearProblem {
    field: Field,
    weights: Vec<f64>,
    maps: Vec<DMatrix<C64>>,
    target: Vec<C64>,
}

impl BlockLinearProblem {
    pub fn new(field: Field, weights: Vec<f64>, maps: Vec<DMatrix<C64>>, target: Vec<C64>) -> Result<Self> {
        if weights.len() != maps.len() || maps.is_empty() {
            return Err(Error::InvalidOptions("one weight per block map is required"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidOptions("weights must be finite and nonnegative"));
        }
        if maps.iter().any(|b| b.nrows() != target.len()) {
            return Err(Error::InvalidOptions("every block map must have one row per target entry"));
        }
        field.validate(&target)?;
        Ok(BlockLinearProblem { field, weights, maps, target })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn constraint_residual(&self, blocks: &[Vec<C64>]) -> f64 {
        let mut r: Vec<C64> = self.target.iter().map(|z| -z).collect();
        for (b, y) in self.maps.iter().zip(blocks) {
            for (row, out) in r.iter_mut().enumerate() {
                *out += (0..b.ncols()).map(|c| b[(row, c)] * y[c]).sum::<C64>();
            }
        }
        linalg::norm(&r)
    }

    fn projector(&self, opts: &SolverOptions) -> Affine {
        let cols: usize = self.maps.iter().map(DMatrix::ncols).sum();
        let mut b = DMatrix::zeros(self.target.len(), cols);
        let mut off = 0;
        for map in &self.maps {
            b.view_mut((0, off), (map.nrows(), map.ncols())).copy_from(map);
            off += map.ncols();
        }
        let (b_pinv, _) = linalg::pinv(&b, opts.feasibility_tol * 1e-3);
        Affine::General { b, b_pinv, target: self.target.clone() }
    }

    pub fn solve_from(&self, start: Option<&[Vec<C64>]>, opts: &SolverOptions) -> Result<MinSumNormsSolution> {
        let dims: Vec<usize> = self.maps.iter().map(DMatrix::ncols).collect();
        let mut sol = admm(&self.projector(opts), self.field, &dims, &self.weights, start, opts)?;
        sol.residual = self.constraint_residual(&sol.blocks);
        Ok(sol)
    }
}

enum Affine {
    /// Row r of Y = [y₁ … y_Q] must satisfy V·Y[r,:]ᵀ = A[r,:]ᵀ.
    Outer {
        v: DMatrix<C64>,
        v_pinv: DMatrix<C64>,
        rows: Vec<Vec<C64>>,
        n: usize,
    },
    General {
        b: DMatrix<C64>,
        b_pinv: DMatrix<C64>,
        target: Vec<C64>,
    },
}

impl Affine {
    fn target_norm(&self) -> f64 {
        match self {
            Affine::Outer { rows, .. } => rows.iter().map(|r| linalg::norm(r).powi(2)).sum::<f64>().sqrt(),
            Affine::General { target, .. } => linalg::norm(target),
        }
    }

    fn apply(&self, y: &[C64]) -> Vec<C64> {
        match self {
            Affine::Outer { v, rows, n, .. } => {
                let m = v.nrows();
                let mut out = vec![C64::new(0.0, 0.0); rows.len() * m];
                for r in 0..rows.len() {
                    for c in 0..m {
                        out[r * m + c] = (0..v.ncols()).map(|i| v[(c, i)] * y[i * n + r]).sum();
                    }
                }
                out
            }
            Affine::General { b, .. } => (0..b.nrows())
                .map(|row| (0..b.ncols()).map(|c| b[(row, c)] * y[c]).sum())
                .collect(),
        }
    }

    fn target(&self) -> Vec<C64> {
        match self {
            Affine::Outer { rows, .. } => rows.iter().flatten().copied().collect(),
            Affine::General { target, .. } => target.clone(),
        }
    }

    fn scale_target(&mut self, s: f64) {
        match self {
            Affine::Outer { rows, .. } => rows.iter_mut().flatten().for_each(|z| *z *= s),
            Affine::General { target, .. } => target.iter_mut().for_each(|z| *z *= s),
        }
    }

    /// In-place projection of the flattened blocks; returns the residual of
    /// the least-squares fit (nonzero only when the target is unreachable).
    fn project(&self, y: &mut [C64]) -> f64 {
        self.project_with(y, true)
    }

    fn project_with(&self, y: &mut [C64], misfit_wanted: bool) -> f64 {
        match self {
            Affine::Outer { v, v_pinv, rows, n } => {
                let q = v.ncols();
                let m = v.nrows();
                let mut misfit = 0.0;
                let mut resid = vec![C64::new(0.0, 0.0); m];
                for (r, a) in rows.iter().enumerate() {
                    for (c, out) in resid.iter_mut().enumerate() {
                        let mut acc = -a[c];
                        for i in 0..q {
                            acc += v[(c, i)] * y[i * n + r];
                        }
                        *out = acc;
                    }
                    for i in 0..q {
                        let mut acc = C64::new(0.0, 0.0);
                        for (c, rc) in resid.iter().enumerate() {
                            acc += v_pinv[(i, c)] * rc;
                        }
                        y[i * n + r] -= acc;
                    }
                    if misfit_wanted {
                        misfit += row_misfit(v, y, a, r, *n);
                    }
                }
                misfit.sqrt()
            }
            Affine::General { b, b_pinv, target } => {
                let resid: Vec<C64> = (0..b.nrows())
                    .map(|row| (0..b.ncols()).map(|c| b[(row, c)] * y[c]).sum::<C64>() - target[row])
                    .collect();
                for (i, yi) in y.iter_mut().enumerate() {
                    *yi -= (0..b.nrows()).map(|row| b_pinv[(i, row)] * resid[row]).sum::<C64>();
                }
                if !misfit_wanted {
                    return 0.0;
                }
                let after: f64 = (0..b.nrows())
                    .map(|row| ((0..b.ncols()).map(|c| b[(row, c)] * y[c]).sum::<C64>() - target[row]).norm_sqr())
                    .sum();
                after.sqrt()
            }
        }
    }
}

fn row_misfit(v: &DMatrix<C64>, y: &[C64], a: &[C64], r: usize, n: usize) -> f64 {
    (0..v.nrows())
        .map(|c| ((0..v.ncols()).map(|i| v[(c, i)] * y[i * n + r]).sum::<C64>() - a[c]).norm_sqr())
        .sum()
}

fn split(flat: &[C64], dims: &[usize]) -> Vec<Vec<C64>> {
    let mut out = Vec::with_capacity(dims.len());
    let mut off = 0;
    for &d in dims {
        out.push(flat[off..off + d].to_vec());
        off += d;
    }
    out
}

fn objective(flat: &[C64], dims: &[usize], weights: &[f64]) -> f64 {
    let mut off = 0;
    let mut total = 0.0;
    for (&d, &w) in dims.iter().zip(weights) {
        if w > 0.0 {
            total += w * linalg::norm(&flat[off..off + d]);
        }
        off += d;
    }
    total
}

fn flat_norm(x: &[C64]) -> f64 {
    linalg::norm(x)
}

/// Blocks lighter than this fraction of the heaviest send the solve to splitting.
const BARRIER_MIN_WEIGHT: f64 = 1e-8;
const BARRIER_MAX_NEWTON: usize = 2000;

/// Over-relaxation factor for the consensus update.
const RELAX: f64 = 1.6;


fn admm(
    affine: &Affine,
    field: Field,
    dims: &[usize],
    weights: &[f64],
    start: Option<&[Vec<C64>]>,
    opts: &SolverOptions,
) -> Result<MinSumNormsSolution> {
    if opts.max_iter == 0 || !(opts.tol_abs > 0.0) || !(opts.tol_rel >= 0.0) || !(opts.rho_init > 0.0) {
        return Err(Error::InvalidOptions("solver tolerances, penalty and iteration cap must be positive"));
    }
    let total: usize = dims.iter().sum();
    let zero_solution = |status| MinSumNormsSolution {
        blocks: dims.iter().map(|&d| vec![C64::new(0.0, 0.0); d]).collect(),
        objective: 0.0,
        residual: 0.0,
        iterations: 0,
        status,
        history: vec![0.0],
        dual: dims.iter().map(|&d| vec![C64::new(0.0, 0.0); d]).collect(),
        multiplier: Vec::new(),
    };

    let scale = affine.target_norm();
    if scale == 0.0 {
        return Ok(zero_solution(SolveStatus::Converged));
    }
    // Work on the unit-norm target; the program is positively homogeneous.
    let mut unit = match affine {
        Affine::Outer { v, v_pinv, rows, n } => Affine::Outer {
            v: v.clone(),
            v_pinv: v_pinv.clone(),
            rows: rows.clone(),
            n: *n,
        },
        Affine::General { b, b_pinv, target } => Affine::General {
            b: b.clone(),
            b_pinv: b_pinv.clone(),
            target: target.clone(),
        },
    };
    unit.scale_target(1.0 / scale);

    let mut least_norm = vec![C64::new(0.0, 0.0); total];
    let misfit = unit.project(&mut least_norm);
    if misfit > opts.feasibility_tol {
        let mut sol = zero_solution(SolveStatus::Infeasible);
        sol.blocks = split(&least_norm.iter().map(|z| z * scale).collect::<Vec<_>>(), dims);
        sol.residual = misfit * scale;
        sol.objective = objective(&least_norm, dims, weights) * scale;
        return Ok(sol);
    }

    let w_eff: Vec<f64> = weights.iter().map(|&w| w.max(opts.weight_floor)).collect();
    let mut x: Vec<C64> = match start {
        Some(blocks) => {
            let mut flat: Vec<C64> = blocks.iter().flatten().map(|z| z / scale).collect();
            if flat.len() != total {
                return Err(Error::InvalidOptions("starting point has the wrong block layout"));
            }
            unit.project(&mut flat);
            flat
        }
        None => least_norm,
    };
    let wmax = weights.iter().copied().fold(0.0, f64::max);
    if opts.method == Method::Barrier && weights.iter().all(|&w| w > BARRIER_MIN_WEIGHT * wmax) {
        let complex = field == Field::Complex;
        let barrier = match &unit {
            Affine::Outer { v, v_pinv, rows, .. } => Barrier::outer(v, v_pinv, rows, complex),
            Affine::General { .. } => Barrier::dense(dims, complex, &unit.target(), |y| unit.apply(y)),
        };
        let budget = opts.max_iter.min(BARRIER_MAX_NEWTON);
        let got = barrier.solve(weights, &x, opts.tol_rel, opts.tol_abs, budget);
        if let Some(out) = got {
            let mut history: Vec<f64> = out.history.iter().map(|h| h * scale).collect();
            let objective = out.objective * scale;
            if let Some(last) = history.last_mut() {
                *last = last.min(objective);
            }
            return Ok(MinSumNormsSolution {
                blocks: split(&out.x.iter().map(|c| c * scale).collect::<Vec<_>>(), dims),
                objective,
                residual: 0.0,
                iterations: out.iterations,
                status: if out.certified { SolveStatus::Converged } else { SolveStatus::MaxIter },
                history,
                dual: split(&out.dual, dims),
                multiplier: out.multiplier,
            });
        }
    }

    let mut z = x.clone();
    let mut u = vec![C64::new(0.0, 0.0); total];
    let mut rho = opts.rho_init;

    let mut best = x.clone();
    let mut best_obj = objective(&x, dims, weights);
    let mut history = vec![best_obj * scale];
    let sqrt_dim = (total as f64).sqrt();
    let mut status = SolveStatus::MaxIter;
    let mut iterations = 0;
    let mut v = vec![C64::new(0.0, 0.0); total];

    for it in 1..=opts.max_iter {
        iterations = it;
        for i in 0..total {
            x[i] = z[i] - u[i];
        }
        unit.project_with(&mut x, false);

        let z_old = core::mem::take(&mut z);
        for i in 0..total {
            v[i] = x[i] * RELAX + z_old[i] * (1.0 - RELAX) + u[i];
        }
        z = v.clone();
        let mut off = 0;
        for (&d, &w) in dims.iter().zip(&w_eff) {
            let block = &mut z[off..off + d];
            let nb = linalg::norm(block);
            let shrink = if nb > w / rho { 1.0 - w / (rho * nb) } else { 0.0 };
            block.iter_mut().for_each(|c| *c *= shrink);
            off += d;
        }
        let mut r2 = 0.0;
        let mut s2 = 0.0;
        for i in 0..total {
            let diff = x[i] - z[i];
            u[i] = v[i] - z[i];
            r2 += diff.norm_sqr();
            s2 += (z[i] - z_old[i]).norm_sqr();
        }
        let r = r2.sqrt();
        let s = rho * s2.sqrt();

        let obj = objective(&x, dims, weights);
        if obj < best_obj {
            best_obj = obj;
            best.copy_from_slice(&x);
        }
        history.push(best_obj * scale);

        let eps_pri = opts.tol_abs * sqrt_dim + opts.tol_rel * flat_norm(&x).max(flat_norm(&z));
        let eps_dual = opts.tol_abs * sqrt_dim + opts.tol_rel * rho * flat_norm(&u);
        if r <= eps_pri && s <= eps_dual {
            status = SolveStatus::Converged;
            break;
        }
        if it % 10 == 0 {
            if r > 10.0 * s {
                rho *= 2.0;
                u.iter_mut().for_each(|c| *c /= 2.0);
            } else if s > 10.0 * r {
                rho /= 2.0;
                u.iter_mut().for_each(|c| *c *= 2.0);
            }
        }
    }

    let dual: Vec<C64> = u.iter().map(|c| c * rho).collect();
    Ok(MinSumNormsSolution {
        blocks: split(&best.iter().map(|c| c * scale).collect::<Vec<_>>(), dims),
        objective: best_obj * scale,
        residual: 0.0,
        iterations,
        status,
        history,
        dual: split(&dual, dims),
        multiplier: Vec::new(),
    })
}
