//! Nuclear-norm upper bounds by alternating minimum-sum-of-norms steps.
//!
//! A decomposition 𝒯 = Σᵢ ⊗ⱼ y_{j,i} certifies ‖𝒯‖_{1,𝔽} ≤ Σᵢ ∏ⱼ‖y_{j,i}‖.
//! For each mode k the factors j ≠ k are normalized (their norms moved into
//! mode k), the list is padded with zero-weight filler terms up to the
//! budget, and the mode-k factors are replaced by the minimizer of
//! Σ‖y_{k,i}‖ subject to reproducing the mode-k unfolding. Every step keeps
//! the decomposition exact and never increases the bound.
//!
//! The symmetric variant works with terms sym(y₁,…,y_d) and alternates over
//! the slots, with the constraint written on the sorted-index coefficients.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::par;
use crate::random::{random_orthonormal_basis, random_unit_vector, stream_rng};
use crate::socp::{BlockLinearProblem, MinSumNormsProblem, SolveStatus, SolverOptions};
use crate::sym::{
    multiplicity, multisets, sym_coefficient, sym_coefficient_budget, sym_term_budget, symmetrize, SymRankOneTerm,
    SymTensor,
};
use crate::tensor::{Field, RankOneDecomposition, RankOneTerm, Shape, Tensor};
use crate::C64;

/// Largest term budget accepted before refusing to run.
pub const DEFAULT_BUDGET_CAP: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
pub struct AltOptions {
    /// Stop once |φ_k^I − φ_k^{I−1}| < eps.
    pub eps: f64,
    pub max_outer: usize,
    pub restarts: usize,
    pub term_budget_override: Option<usize>,
    pub budget_cap: usize,
    pub seed: u64,
    /// Require every mode of a sweep to be below `eps` instead of the first one.
    pub full_sweep_stop: bool,
    /// Terms whose mode-k factor is below this fraction of φ are dropped.
    pub prune_rel: f64,
    pub compress: bool,
    pub socp: SolverOptions,
}

impl Default for AltOptions {
    fn default() -> Self {
        AltOptions {
            eps: 1e-6,
            max_outer: 100,
            restarts: 30,
            term_budget_override: None,
            budget_cap: DEFAULT_BUDGET_CAP,
            seed: 0,
            full_sweep_stop: false,
            prune_rel: 1e-9,
            compress: true,
            socp: SolverOptions::default(),
        }
    }
}

impl AltOptions {
    fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) || self.max_outer == 0 || self.restarts == 0 {
            return Err(Error::InvalidOptions("eps, max_outer and restarts must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AltStatus {
    Converged,
    MaxOuter,
}

#[derive(Clone, Debug)]
pub struct NuclearResult {
    pub value: f64,
    pub decomposition: RankOneDecomposition,
    /// φ after each minimization step of the winning restart (index 0 is the start).
    pub history: Vec<f64>,
    pub active_terms: usize,
    pub status: AltStatus,
    pub best_restart: usize,
    pub outer_iterations: usize,
    pub budget: usize,
    /// Inner solves that stopped at the iteration cap, over all restarts.
    pub solver_maxiter: usize,
}

/// N(n, 𝔽) = ∏ nⱼ, doubled over ℂ.
pub fn term_budget(shape: &Shape, field: Field) -> Result<usize> {
    let base = shape.total_size();
    match field {
        Field::Real => Ok(base),
        Field::Complex => base.checked_mul(2).ok_or(Error::SizeOverflow { dims: shape.dims().to_vec() }),
    }
}

fn unit(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[i] = C64::new(1.0, 0.0);
    v
}

/// 𝒯 = Σ t_{i₁…i_d} e_{i₁} ⊗ … ⊗ e_{i_d}, with the entry carried by mode 0.
pub fn initial_decomposition(t: &Tensor, field: Field) -> Result<RankOneDecomposition> {
    t.require_field(field)?;
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let terms = t
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(flat, &v)| {
            let idx = t.shape().multi_index(flat);
            let factors = idx
                .iter()
                .zip(t.dims())
                .enumerate()
                .map(|(j, (&i, &n))| {
                    let mut e = unit(n, i);
                    if j == 0 {
                        e[i] = v;
                    }
                    e
                })
                .collect();
            RankOneTerm { factors }
        })
        .collect();
    Ok(RankOneDecomposition { shape: t.shape().clone(), field, terms })
}

/// 𝒯 expanded in orthonormal bases Q_j (one n_j × n_j matrix per mode): the
/// coefficients are 𝒯 ×₁ Q₁ᴴ ⋯ ×_d Q_dᴴ and each term is c_i q_{1,i₁} ⊗ … ⊗ q_{d,i_d}.
pub fn basis_decomposition(t: &Tensor, field: Field, bases: &[DMatrix<C64>]) -> Result<RankOneDecomposition> {
    t.require_field(field)?;
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    if bases.len() != t.order() || bases.iter().zip(t.dims()).any(|(q, &n)| q.nrows() != n || q.ncols() != n) {
        return Err(Error::InvalidOptions("one square basis per mode is required"));
    }
    let mut coeffs = t.clone();
    for (j, q) in bases.iter().enumerate() {
        coeffs = coeffs.mode_product(j, &q.adjoint())?;
    }
    let terms = coeffs
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
        .map(|(flat, &v)| {
            let idx = coeffs.shape().multi_index(flat);
            let factors = idx
                .iter()
                .zip(bases)
                .enumerate()
                .map(|(j, (&i, q))| {
                    let col = q.column(i);
                    if j == 0 {
                        col.iter().map(|z| z * v).collect()
                    } else {
                        col.iter().copied().collect()
                    }
                })
                .collect();
            RankOneTerm { factors }
        })
        .collect();
    Ok(RankOneDecomposition { shape: t.shape().clone(), field, terms })
}

/// Left singular bases of the unfoldings (eigenvectors of A_k A_kᴴ). For a
/// matrix the expansion in these bases is its SVD.
pub fn hosvd_bases(t: &Tensor) -> Result<Vec<DMatrix<C64>>> {
    (0..t.order())
        .map(|k| {
            let a = t.unfold(k)?;
            Ok((&a * a.adjoint()).symmetric_eigen().eigenvectors)
        })
        .collect()
}

/// Start of restart r: 0 is the canonical basis, 1 the HOSVD basis and
/// later restarts random orthonormal bases.
pub fn restart_decomposition<R: Rng + ?Sized>(
    t: &Tensor,
    field: Field,
    restart: usize,
    rng: &mut R,
) -> Result<RankOneDecomposition> {
    match restart {
        0 => initial_decomposition(t, field),
        1 => basis_decomposition(t, field, &hosvd_bases(t)?),
        _ => {
            let bases: Vec<_> = t.dims().iter().map(|&n| random_orthonormal_basis(rng, n, field)).collect();
            basis_decomposition(t, field, &bases)
        }
    }
}

/// Normalizes the factors j ≠ k, moves their norms into mode k and pads the
/// list to `budget` terms with random unit factors and a zero mode-k factor.
pub fn extension_step<R: Rng + ?Sized>(
    dec: &RankOneDecomposition,
    k: usize,
    budget: usize,
    rng: &mut R,
) -> Result<RankOneDecomposition> {
    let d = dec.shape.order();
    if k >= d {
        return Err(Error::ModeOutOfRange { mode: k, order: d });
    }
    let mut terms = Vec::with_capacity(budget);
    for term in &dec.terms {
        let mut factors = term.factors.clone();
        let mut scale = 1.0;
        for (j, f) in factors.iter_mut().enumerate() {
            if j != k {
                scale *= linalg::normalize(f);
            }
        }
        if scale == 0.0 || linalg::norm(&factors[k]) == 0.0 {
            continue;
        }
        factors[k].iter_mut().for_each(|z| *z *= scale);
        terms.push(RankOneTerm { factors });
    }
    if terms.len() > budget {
        return Err(Error::TooManyTerms { terms: terms.len(), budget });
    }
    while terms.len() < budget {
        let factors = dec
            .shape
            .dims()
            .iter()
            .enumerate()
            .map(|(j, &n)| {
                if j == k {
                    vec![C64::new(0.0, 0.0); n]
                } else {
                    random_unit_vector(rng, n, dec.field)
                }
            })
            .collect();
        terms.push(RankOneTerm { factors });
    }
    Ok(RankOneDecomposition { shape: dec.shape.clone(), field: dec.field, terms })
}

/// vec(⊗_{j≠k} y_j) in the column order of the mode-k unfolding.
fn other_modes_vector(factors: &[Vec<C64>], k: usize) -> Vec<C64> {
    let mut out = vec![C64::new(1.0, 0.0)];
    for (j, f) in factors.iter().enumerate() {
        if j == k {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * f.len());
        for &a in &out {
            next.extend(f.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

/// Outcome of one minimization step.
#[derive(Clone, Debug)]
pub struct StepReport {
    pub phi: f64,
    pub status: SolveStatus,
    pub iterations: usize,
}

/// Replaces the mode-k factors by the minimizer of Σᵢ wᵢ‖y_{k,i}‖ with
/// wᵢ = ∏_{j≠k}‖y_{j,i}‖, subject to Σ y_{k,i} vᵢᵀ = unfold(𝒯, k).
pub fn minimization_step(
    t: &Tensor,
    dec: &mut RankOneDecomposition,
    k: usize,
    socp: &SolverOptions,
) -> Result<StepReport> {
    let target = t.unfold(k)?;
    let mut factors = Vec::with_capacity(dec.terms.len());
    let mut norms = Vec::with_capacity(dec.terms.len());
    let mut start = Vec::with_capacity(dec.terms.len());
    for term in &dec.terms {
        let mut v = other_modes_vector(&term.factors, k);
        let w = linalg::normalize(&mut v);
        if w == 0.0 {
            return Err(Error::Numerical("a fixed factor vanished"));
        }
        factors.push(v);
        norms.push(w);
        start.push(term.factors[k].iter().map(|z| z * w).collect::<Vec<_>>());
    }
    let problem = MinSumNormsProblem::new(dec.field, vec![1.0; factors.len()], factors, target)?;
    let sol = problem.solve_from(Some(&start), socp)?;
    if sol.status == SolveStatus::Infeasible {
        return Err(Error::Infeasible { residual: sol.residual });
    }
    for ((term, y), w) in dec.terms.iter_mut().zip(sol.blocks).zip(norms) {
        term.factors[k] = y.iter().map(|z| z / w).collect();
        if dec.field == Field::Real {
            term.factors[k].iter_mut().for_each(|z| z.im = 0.0);
        }
    }
    Ok(StepReport { phi: dec.bound(), status: sol.status, iterations: sol.iterations })
}

fn prune(dec: &mut RankOneDecomposition, phi: f64, rel: f64) {
    let floor = rel * phi;
    dec.terms.retain(|t| t.norm_product() >= floor && t.norm_product() > 0.0);
}

struct RunOutcome {
    dec: RankOneDecomposition,
    history: Vec<f64>,
    status: AltStatus,
    outer: usize,
    solver_maxiter: usize,
}

fn alternate(t: &Tensor, field: Field, budget: usize, restart: usize, opts: &AltOptions) -> Result<RunOutcome> {
    let d = t.order();
    let mut rng = stream_rng(opts.seed, restart as u64);
    let mut dec = restart_decomposition(t, field, restart, &mut rng)?;
    let mut history = vec![dec.bound()];
    let mut last: Vec<Option<f64>> = vec![None; d];
    let mut solver_maxiter = 0;
    for outer in 1..=opts.max_outer {
        let mut all_small = true;
        for k in 0..d {
            let mut ext = extension_step(&dec, k, budget, &mut rng)?;
            let report = minimization_step(t, &mut ext, k, &opts.socp)?;
            if report.status == SolveStatus::MaxIter {
                solver_maxiter += 1;
            }
            prune(&mut ext, report.phi, opts.prune_rel);
            dec = ext;
            let phi = dec.bound();
            history.push(phi);
            let small = last[k].is_some_and(|p| (phi - p).abs() < opts.eps);
            last[k] = Some(phi);
            all_small &= small;
            if small && !opts.full_sweep_stop {
                return Ok(RunOutcome { dec, history, status: AltStatus::Converged, outer, solver_maxiter });
            }
        }
        if opts.full_sweep_stop && all_small {
            return Ok(RunOutcome { dec, history, status: AltStatus::Converged, outer, solver_maxiter });
        }
    }
    Ok(RunOutcome { dec, history, status: AltStatus::MaxOuter, outer: opts.max_outer, solver_maxiter })
}

/// Multistart alternating minimization: the smallest bound over all restarts.
pub fn nuclear_upper(t: &Tensor, field: Field, opts: &AltOptions) -> Result<NuclearResult> {
    opts.validate()?;
    t.require_field(field)?;
    if t.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let t = t.clone().with_field(field.join(t.field()))?;
    let t = if field == Field::Real { t.with_field(Field::Real)? } else { t };
    if t.order() <= 1 {
        let dec = if t.order() == 0 {
            RankOneDecomposition { shape: t.shape().clone(), field, terms: vec![RankOneTerm { factors: Vec::new() }] }
        } else {
            RankOneDecomposition {
                shape: t.shape().clone(),
                field,
                terms: vec![RankOneTerm { factors: vec![t.entries().to_vec()] }],
            }
        };
        let value = t.hs_norm();
        return Ok(NuclearResult {
            value,
            decomposition: dec,
            history: vec![value],
            active_terms: 1,
            status: AltStatus::Converged,
            best_restart: 0,
            outer_iterations: 0,
            budget: 1,
            solver_maxiter: 0,
        });
    }

    let compression = if opts.compress { Some(t.compress()?) } else { None };
    let core = compression.as_ref().map_or(&t, |c| c.core());
    let budget = match opts.term_budget_override {
        Some(b) => b,
        None => term_budget(core.shape(), field)?,
    };
    if budget > opts.budget_cap {
        return Err(Error::BudgetExceeded { budget, cap: opts.budget_cap });
    }
    if budget == 0 {
        return Err(Error::InvalidOptions("term budget must be positive"));
    }

    let runs = par::map_indexed(opts.restarts, |r| alternate(core, field, budget, r, opts));
    let solver_maxiter = runs.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.solver_maxiter).sum();
    let mut best: Option<(usize, RunOutcome)> = None;
    let mut first_err = None;
    for (r, run) in runs.into_iter().enumerate() {
        match run {
            Ok(out) => {
                if best.as_ref().is_none_or(|(_, b)| out.dec.bound() < b.dec.bound()) {
                    best = Some((r, out));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let (best_restart, out) = match best {
        Some(b) => b,
        None => return Err(first_err.unwrap_or(Error::Numerical("no restart completed"))),
    };
    let decomposition = match &compression {
        Some(c) => c.lift(&out.dec),
        None => out.dec,
    };
    Ok(NuclearResult {
        value: decomposition.bound(),
        active_terms: decomposition.terms.len(),
        decomposition,
        history: out.history,
        status: out.status,
        best_restart,
        outer_iterations: out.outer,
        budget,
        solver_maxiter,
    })
}

/// P_𝔽 = ‖𝒯‖_{1,𝔽}·‖𝒯‖_{∞,𝔽} estimated from the two bounds.
pub fn duality_gap(nuclear_value: f64, spectral_value: f64) -> f64 {
    nuclear_value * spectral_value
}

/// Whether the product of the bounds meets ‖𝒯‖² within `tol`, the necessary
/// condition for a maximally entangled state.
pub fn meets_duality(t: &Tensor, nuclear_value: f64, spectral_value: f64, tol: f64) -> bool {
    let hs2 = t.hs_norm().powi(2);
    (duality_gap(nuclear_value, spectral_value) - hs2).abs() <= tol * hs2.max(1.0)
}

/// ω = log₂‖𝒯‖₁² evaluated at the nuclear upper bound.
pub fn omega(t: &Tensor, nuclear_value: f64) -> Result<f64> {
    let norm = t.hs_norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnitState { norm });
    }
    Ok((nuclear_value * nuclear_value).log2())
}

// ---------------------------------------------------------------------------
// symmetric tensors

/// Which count fixed the number of symmetric terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymBudgetRule {
    /// C(n+d−1, d−1), the slot-space dimension.
    SlotDimension,
    /// C(n+d−1, d), the number of coefficients.
    CoefficientCount,
    Override,
}

/// Σᵢ sym(y_{1,i},…,y_{d,i}).
#[derive(Clone, Debug, PartialEq)]
pub struct SymDecomposition {
    pub n: usize,
    pub d: usize,
    pub field: Field,
    /// terms[i][slot] = y_{slot,i}.
    pub terms: Vec<Vec<Vec<C64>>>,
}

impl SymDecomposition {
    pub fn bound(&self) -> f64 {
        self.terms.iter().map(|t| t.iter().map(|y| linalg::norm(y)).product::<f64>()).sum()
    }

    pub fn materialize(&self) -> Result<SymTensor> {
        let mut coeffs = vec![C64::new(0.0, 0.0); multisets(self.n, self.d).len()];
        for term in &self.terms {
            let s = symmetrize(self.field, term)?;
            for (c, v) in coeffs.iter_mut().zip(s.coeffs()) {
                *c += v;
            }
        }
        SymTensor::new(self.n, self.d, self.field, coeffs)
    }

    /// Expands every symmetrized term into its d! weighted permutations.
    pub fn to_rank_one(&self) -> Result<RankOneDecomposition> {
        let perms = permutations(self.d);
        let w = 1.0 / perms.len() as f64;
        let mut terms = Vec::with_capacity(self.terms.len() * perms.len());
        for term in &self.terms {
            for p in &perms {
                let mut factors: Vec<Vec<C64>> = p.iter().map(|&s| term[s].clone()).collect();
                factors[0].iter_mut().for_each(|z| *z *= w);
                terms.push(RankOneTerm { factors });
            }
        }
        RankOneDecomposition::new(Shape::new(vec![self.n; self.d])?, self.field, terms)
    }

    /// Σ εᵢ⊗ᵈxᵢ when every term has parallel slots (within `tol` in angle).
    pub fn witness(&self, tol: f64) -> Option<Vec<SymRankOneTerm>> {
        let d = self.d;
        let mut out = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let mut z = term[0].clone();
            if linalg::normalize(&mut z) == 0.0 {
                return None;
            }
            // y_j = c_j z
            let mut prod = C64::new(1.0, 0.0);
            for y in term {
                let c = linalg::dot(y, &z);
                if (c.norm() - linalg::norm(y)).abs() > tol * linalg::norm(y).max(1e-300) {
                    return None;
                }
                prod *= c;
            }
            let (root, sign) = match self.field {
                Field::Complex => (prod.powf(1.0 / d as f64), 1),
                Field::Real => {
                    let mag = prod.re.abs().powf(1.0 / d as f64);
                    if prod.re >= 0.0 {
                        (C64::new(mag, 0.0), 1)
                    } else if d % 2 == 1 {
                        (C64::new(-mag, 0.0), 1)
                    } else {
                        (C64::new(mag, 0.0), -1)
                    }
                }
            };
            let vector = z.iter().map(|&x| x * root).collect();
            out.push(SymRankOneTerm { vector, sign });
        }
        Some(out)
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    heap_permute(d, &mut cur, &mut out);
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

#[derive(Clone, Debug)]
pub struct SymNuclearResult {
    pub value: f64,
    pub decomposition: SymDecomposition,
    pub witness: Option<Vec<SymRankOneTerm>>,
    pub history: Vec<f64>,
    pub active_terms: usize,
    pub status: AltStatus,
    pub best_restart: usize,
    pub outer_iterations: usize,
    pub budget: usize,
    pub budget_rule: SymBudgetRule,
    pub solver_maxiter: usize,
}

/// Each nonzero coefficient c_α becomes sym(c_α·mult(α)·e_{α₁}, e_{α₂}, …).
pub fn sym_initial_decomposition(s: &SymTensor, field: Field) -> Result<SymDecomposition> {
    if s.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let n = s.n();
    let terms = multisets(n, s.d())
        .into_iter()
        .zip(s.coeffs())
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(alpha, &c)| {
            let m = multiplicity(&alpha);
            alpha
                .iter()
                .enumerate()
                .map(|(slot, &i)| {
                    let mut e = unit(n, i);
                    if slot == 0 {
                        e[i] = c * m;
                    }
                    e
                })
                .collect()
        })
        .collect();
    Ok(SymDecomposition { n, d: s.d(), field, terms })
}

fn sym_extension<R: Rng + ?Sized>(dec: &SymDecomposition, k: usize, budget: usize, rng: &mut R) -> Result<SymDecomposition> {
    let mut terms = Vec::with_capacity(budget);
    for term in &dec.terms {
        let mut slots = term.clone();
        let mut scale = 1.0;
        for (j, y) in slots.iter_mut().enumerate() {
            if j != k {
                scale *= linalg::normalize(y);
            }
        }
        if scale == 0.0 || linalg::norm(&slots[k]) == 0.0 {
            continue;
        }
        slots[k].iter_mut().for_each(|z| *z *= scale);
        terms.push(slots);
    }
    if terms.len() > budget {
        return Err(Error::TooManyTerms { terms: terms.len(), budget });
    }
    while terms.len() < budget {
        let slots = (0..dec.d)
            .map(|j| {
                if j == k {
                    vec![C64::new(0.0, 0.0); dec.n]
                } else {
                    random_unit_vector(rng, dec.n, dec.field)
                }
            })
            .collect();
        terms.push(slots);
    }
    Ok(SymDecomposition { n: dec.n, d: dec.d, field: dec.field, terms })
}

/// Column r of the returned map is the coefficient vector of sym(…, e_r at slot k, …).
fn slot_map(term: &[Vec<C64>], k: usize, alphas: &[Vec<usize>], n: usize) -> DMatrix<C64> {
    let mut slots = term.to_vec();
    DMatrix::from_fn(alphas.len(), n, |row, r| {
        slots[k] = unit(n, r);
        sym_coefficient(&slots, &alphas[row])
    })
}

fn sym_minimization(
    s: &SymTensor,
    dec: &mut SymDecomposition,
    k: usize,
    socp: &SolverOptions,
) -> Result<StepReport> {
    let alphas = multisets(s.n(), s.d());
    let maps: Vec<DMatrix<C64>> = dec.terms.iter().map(|t| slot_map(t, k, &alphas, s.n())).collect();
    let start: Vec<Vec<C64>> = dec.terms.iter().map(|t| t[k].clone()).collect();
    let problem = BlockLinearProblem::new(dec.field, vec![1.0; maps.len()], maps, s.coeffs().to_vec())?;
    let sol = problem.solve_from(Some(&start), socp)?;
    if sol.status == SolveStatus::Infeasible {
        return Err(Error::Infeasible { residual: sol.residual });
    }
    for (term, mut y) in dec.terms.iter_mut().zip(sol.blocks) {
        if dec.field == Field::Real {
            y.iter_mut().for_each(|z| z.im = 0.0);
        }
        term[k] = y;
    }
    Ok(StepReport { phi: dec.bound(), status: sol.status, iterations: sol.iterations })
}

struct SymRun {
    dec: SymDecomposition,
    history: Vec<f64>,
    status: AltStatus,
    outer: usize,
    solver_maxiter: usize,
}

fn sym_alternate(s: &SymTensor, field: Field, budget: usize, restart: usize, opts: &AltOptions) -> Result<SymRun> {
    let d = s.d();
    let mut dec = sym_initial_decomposition(s, field)?;
    let mut rng = stream_rng(opts.seed, restart as u64);
    let mut history = vec![dec.bound()];
    let mut last: Vec<Option<f64>> = vec![None; d];
    let mut solver_maxiter = 0;
    for outer in 1..=opts.max_outer {
        let mut all_small = true;
        for k in 0..d {
            let mut ext = sym_extension(&dec, k, budget, &mut rng)?;
            let report = sym_minimization(s, &mut ext, k, &opts.socp)?;
            if report.status == SolveStatus::MaxIter {
                solver_maxiter += 1;
            }
            let floor = opts.prune_rel * report.phi;
            ext.terms.retain(|t| {
                let w: f64 = t.iter().map(|y| linalg::norm(y)).product();
                w > 0.0 && w >= floor
            });
            dec = ext;
            let phi = dec.bound();
            history.push(phi);
            let small = last[k].is_some_and(|p| (phi - p).abs() < opts.eps);
            last[k] = Some(phi);
            all_small &= small;
            if small && !opts.full_sweep_stop {
                return Ok(SymRun { dec, history, status: AltStatus::Converged, outer, solver_maxiter });
            }
        }
        if opts.full_sweep_stop && all_small {
            return Ok(SymRun { dec, history, status: AltStatus::Converged, outer, solver_maxiter });
        }
    }
    Ok(SymRun { dec, history, status: AltStatus::MaxOuter, outer: opts.max_outer, solver_maxiter })
}

/// Budget for the symmetric algorithm: the override if given, otherwise the
/// larger of C(n+d−1, d−1) and C(n+d−1, d) (each doubled over ℂ).
pub fn sym_budget(n: usize, d: usize, field: Field, opts: &AltOptions) -> Result<(usize, SymBudgetRule)> {
    if let Some(b) = opts.term_budget_override {
        return Ok((b, SymBudgetRule::Override));
    }
    let slot = sym_term_budget(n, d, field)?;
    let coeff = sym_coefficient_budget(n, d, field)?;
    Ok(if slot >= coeff { (slot, SymBudgetRule::SlotDimension) } else { (coeff, SymBudgetRule::CoefficientCount) })
}

/// Multistart alternating minimization over symmetric decompositions.
pub fn sym_nuclear_upper(s: &SymTensor, field: Field, opts: &AltOptions) -> Result<SymNuclearResult> {
    opts.validate()?;
    if field == Field::Real {
        Field::Real
            .validate(s.coeffs())
            .map_err(|_| Error::FieldMismatch("real norm requested for a tensor with complex entries"))?;
    }
    if s.is_zero() {
        return Err(Error::ZeroTensor);
    }
    let s = SymTensor::new(s.n(), s.d(), field, s.coeffs().to_vec())?;
    let (budget, budget_rule) = sym_budget(s.n(), s.d(), field, opts)?;
    if budget > opts.budget_cap {
        return Err(Error::BudgetExceeded { budget, cap: opts.budget_cap });
    }
    if budget == 0 {
        return Err(Error::InvalidOptions("term budget must be positive"));
    }
    let runs = par::map_indexed(opts.restarts, |r| sym_alternate(&s, field, budget, r, opts));
    let solver_maxiter = runs.iter().filter_map(|r| r.as_ref().ok()).map(|r| r.solver_maxiter).sum();
    let mut best: Option<(usize, SymRun)> = None;
    let mut first_err = None;
    for (r, run) in runs.into_iter().enumerate() {
        match run {
            Ok(out) => {
                if best.as_ref().is_none_or(|(_, b)| out.dec.bound() < b.dec.bound()) {
                    best = Some((r, out));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let (best_restart, out) = match best {
        Some(b) => b,
        None => return Err(first_err.unwrap_or(Error::Numerical("no restart completed"))),
    };
    Ok(SymNuclearResult {
        value: out.dec.bound(),
        witness: out.dec.witness(1e-6),
        active_terms: out.dec.terms.len(),
        decomposition: out.dec,
        history: out.history,
        status: out.status,
        best_restart,
        outer_iterations: out.outer,
        budget,
        budget_rule,
        solver_maxiter,
    })
}
