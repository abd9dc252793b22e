//! Density tensors, separability, partial transposes and named states.
//!
//! A density tensor on base shape (n₁,…,n_d) is a 2d-mode tensor
//! a_{i₁…i_d j₁…j_d}; grouping the first d indices as the row and the last
//! d as the column gives the usual N×N density matrix, which for row-major
//! storage is the flat entry list itself.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::nuclear::{nuclear_upper, AltOptions, NuclearResult};
use crate::sym::SymTensor;
use crate::tensor::{Field, Shape, Tensor};
use crate::C64;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTensor {
    base: Shape,
    tensor: Tensor,
}

/// Base shape of a 2d-mode tensor whose mode j and mode j+d agree.
fn paired_base(t: &Tensor) -> Result<Shape> {
    let dims = t.dims();
    if dims.is_empty() || dims.len() % 2 != 0 {
        return Err(Error::InvalidDensity("a density tensor needs an even, positive number of modes"));
    }
    let d = dims.len() / 2;
    if dims[..d] != dims[d..] {
        return Err(Error::InvalidDensity("mode j and mode j+d must have equal dimensions"));
    }
    Shape::new(dims[..d].to_vec())
}

/// Σ over diagonal multi-indices a_{i…i…}.
pub fn trace_2d(t: &Tensor) -> Result<C64> {
    let base = paired_base(t)?;
    let n = base.total_size();
    Ok((0..n).map(|i| t.entries()[i * n + i]).sum())
}

fn matrix_of(t: &Tensor, n: usize) -> DMatrix<C64> {
    DMatrix::from_row_slice(n, n, t.entries())
}

impl DensityTensor {
    /// Admits `t` as a state: hermitian, trace one and positive semidefinite.
    pub fn from_tensor(t: Tensor) -> Result<Self> {
        let base = paired_base(&t)?;
        let n = base.total_size();
        let m = matrix_of(&t, n);
        let mut deviation: f64 = 0.0;
        for r in 0..n {
            for c in 0..n {
                deviation = deviation.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace: C64 = (0..n).map(|i| m[(i, i)]).sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eigenvalue = linalg::hermitian_eigenvalues(&m)[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(DensityTensor { base, tensor: t })
    }

    pub fn base_shape(&self) -> &Shape {
        &self.base
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn trace(&self) -> C64 {
        trace_2d(&self.tensor).expect("layout checked at construction")
    }

    /// N×N matricization, row multi-index first.
    pub fn matrix(&self) -> DMatrix<C64> {
        matrix_of(&self.tensor, self.base.total_size())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eigenvalues(&self.matrix())[0]
    }
}

pub fn dtrace(a: &DensityTensor) -> C64 {
    a.trace()
}

/// 𝒯 ⊗ conj(𝒯) for a unit state 𝒯.
pub fn pure_density(t: &Tensor) -> Result<DensityTensor> {
    let norm = t.hs_norm();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NotUnitState { norm });
    }
    DensityTensor::from_tensor(t.tensor_product(&t.conj())?)
}

fn is_unit_product(t: &Tensor) -> bool {
    if (t.hs_norm() - 1.0).abs() > 1e-8 {
        return false;
    }
    (0..t.order()).all(|k| {
        let s = linalg::singular_values(&t.unfold(k).expect("mode in range"));
        s.get(1).copied().unwrap_or(0.0) <= 1e-8
    })
}

/// Σᵢ pᵢ 𝒳ᵢ ⊗ conj(𝒳ᵢ) for unit product states 𝒳ᵢ and probabilities pᵢ.
pub fn separable_mixture(probs: &[f64], states: &[Tensor]) -> Result<DensityTensor> {
    if probs.is_empty() || probs.len() != states.len() {
        return Err(Error::InvalidProbabilities("one probability per state is required"));
    }
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(Error::InvalidProbabilities("probabilities must be nonnegative"));
    }
    if (probs.iter().sum::<f64>() - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidProbabilities("probabilities must sum to one"));
    }
    let shape = states[0].shape().clone();
    let field = states.iter().fold(Field::Real, |f, s| f.join(s.field()));
    let mut acc: Option<Tensor> = None;
    for (index, (p, x)) in probs.iter().zip(states).enumerate() {
        if x.shape() != &shape || !is_unit_product(x) {
            return Err(Error::NotProductState { index });
        }
        let x = x.clone().with_field(field)?;
        let term = x.tensor_product(&x.conj())?.scale(C64::new(*p, 0.0));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    DensityTensor::from_tensor(acc.expect("nonempty"))
}

/// Swaps mode j with mode j+d for every j in `subset`.
pub fn partial_transpose(a: &DensityTensor, subset: &[usize]) -> Result<Tensor> {
    let d = a.base.order();
    let mut seen = vec![false; d];
    if subset.is_empty()
        || subset.len() >= d
        || subset.iter().any(|&j| j >= d || core::mem::replace(&mut seen[j], true))
    {
        return Err(Error::InvalidSubset { subset: subset.to_vec() });
    }
    let mut perm: Vec<usize> = (0..2 * d).collect();
    for &j in subset {
        perm.swap(j, j + d);
    }
    a.tensor.permute(&perm)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PptResult {
    pub subset: Vec<usize>,
    pub passed: bool,
    pub min_eigenvalue: f64,
}

/// Positivity of the partial transpose on `subset` (a nonempty proper set of modes).
pub fn ppt_check(a: &DensityTensor, subset: &[usize]) -> Result<PptResult> {
    let pt = partial_transpose(a, subset)?;
    let m = matrix_of(&pt, a.base.total_size());
    let min_eigenvalue = linalg::hermitian_eigenvalues(&m)[0];
    Ok(PptResult { subset: subset.to_vec(), passed: min_eigenvalue >= -PSD_TOL, min_eigenvalue })
}

/// Single-party transposes, which cover every bipartition of one party
/// against the rest. For two parties one transpose suffices.
pub fn default_ppt_subsets(d: usize) -> Vec<Vec<usize>> {
    match d {
        0 | 1 => Vec::new(),
        2 => vec![vec![0]],
        _ => (0..d).map(|j| vec![j]).collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeparabilityStatus {
    Separable,
    Entangled,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct SeparabilityOptions {
    pub margin: f64,
    pub alt: AltOptions,
    /// `None` runs [`default_ppt_subsets`]; an empty list skips PPT.
    pub ppt_subsets: Option<Vec<Vec<usize>>>,
}

impl Default for SeparabilityOptions {
    fn default() -> Self {
        SeparabilityOptions { margin: 1e-3, alt: AltOptions::default(), ppt_subsets: None }
    }
}

#[derive(Clone, Debug)]
pub struct SeparabilityVerdict {
    pub status: SeparabilityStatus,
    pub nuclear_value: f64,
    pub margin: f64,
    pub ppt: Vec<PptResult>,
    /// Set when an Entangled verdict rests only on the nuclear upper bound.
    pub heuristic: bool,
    pub nuclear: NuclearResult,
}

impl SeparabilityVerdict {
    pub fn ppt_passed(&self) -> Option<bool> {
        if self.ppt.is_empty() {
            None
        } else {
            Some(self.ppt.iter().all(|p| p.passed))
        }
    }
}

/// ‖𝒜‖_{1,ℂ} ≥ 1 with equality exactly for separable states. The computed
/// value is an upper bound, so a value near one certifies separability while
/// a larger value alone does not certify entanglement.
pub fn separability_check(a: &DensityTensor, opts: &SeparabilityOptions) -> Result<SeparabilityVerdict> {
    if !(opts.margin >= 0.0) {
        return Err(Error::InvalidOptions("margin must be nonnegative"));
    }
    let subsets = opts.ppt_subsets.clone().unwrap_or_else(|| default_ppt_subsets(a.base.order()));
    let ppt = subsets.iter().map(|s| ppt_check(a, s)).collect::<Result<Vec<_>>>()?;
    let nuclear = nuclear_upper(&a.tensor, Field::Complex, &opts.alt)?;
    let value = nuclear.value;
    let ppt_failed = ppt.iter().any(|p| !p.passed);
    let (status, heuristic) = if ppt_failed {
        (SeparabilityStatus::Entangled, false)
    } else if value - 1.0 > opts.margin {
        (SeparabilityStatus::Entangled, true)
    } else if (value - 1.0).abs() <= opts.margin {
        (SeparabilityStatus::Separable, false)
    } else {
        (SeparabilityStatus::Inconclusive, false)
    };
    Ok(SeparabilityVerdict { status, nuclear_value: value, margin: opts.margin, ppt, heuristic, nuclear })
}

// ---------------------------------------------------------------------------
// catalog

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StateParams {
    pub n: Option<usize>,
    pub lambda: Option<C64>,
    pub index: Option<usize>,
    pub b: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum KnownState {
    Pure(Tensor),
    Density(DensityTensor),
}

impl KnownState {
    pub fn tensor(&self) -> &Tensor {
        match self {
            KnownState::Pure(t) => t,
            KnownState::Density(a) => a.tensor(),
        }
    }
}

pub const KNOWN_STATE_NAMES: &[&str] =
    &["W", "GHZ", "T", "M4", "sym-qubit", "nonsym-qubit", "werner", "horodecki-2x4", "sym4-max"];

fn r(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Tensor of shape 2^d from 1-based index strings like "1122".
fn qubits(d: usize, field: Field, entries: &[(&str, C64)]) -> Tensor {
    let shape = Shape::new(vec![2; d]).expect("qubit shape");
    let mut data = vec![r(0.0); shape.total_size()];
    for (idx, v) in entries {
        let multi: Vec<usize> = idx.bytes().map(|b| usize::from(b - b'1')).collect();
        data[shape.flat_index(&multi)] = *v;
    }
    Tensor::new(shape, field, data).expect("catalog entries match their field")
}

fn sym_qubits(d: usize, entries: &[(&str, f64)]) -> Tensor {
    let idx: Vec<Vec<usize>> =
        entries.iter().map(|(s, _)| s.bytes().map(|b| usize::from(b - b'1')).collect()).collect();
    let pairs: Vec<(&[usize], C64)> = idx.iter().zip(entries).map(|(i, (_, v))| (i.as_slice(), r(*v))).collect();
    SymTensor::from_entries(2, d, Field::Real, &pairs).expect("catalog indices are valid").densify()
}

fn normalized(t: Tensor) -> Tensor {
    let n = t.hs_norm();
    t.scale(r(1.0 / n))
}

fn param_b(params: &StateParams) -> Result<f64> {
    let b = params.b.ok_or_else(|| Error::ParamOutOfRange(String::from("parameter b is required")))?;
    if !(0.0..=1.0).contains(&b) {
        return Err(Error::ParamOutOfRange(format!("b = {b} is outside [0, 1]")));
    }
    Ok(b)
}

fn index_param(params: &StateParams, max: usize) -> Result<usize> {
    let i = params.index.ok_or_else(|| Error::ParamOutOfRange(String::from("parameter index is required")))?;
    if i == 0 || i > max {
        return Err(Error::ParamOutOfRange(format!("index {i} is outside 1..={max}")));
    }
    Ok(i)
}

/// The tensor 𝒯_{n,λ} = (λ u^{⊗n} + λ̄ ū^{⊗n})/√2, u = (1, i)/√2. It is real
/// for every unit λ, since the two terms are conjugate.
pub fn t_state(n: usize, lambda: C64) -> Result<Tensor> {
    if n == 0 {
        return Err(Error::ParamOutOfRange(String::from("n must be at least 1")));
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::ParamOutOfRange(format!("|lambda| = {} must be 1", lambda.norm())));
    }
    let u = [r(1.0 / 2f64.sqrt()), C64::new(0.0, 1.0 / 2f64.sqrt())];
    let shape = Shape::new(vec![2; n])?;
    Tensor::from_fn(shape, Field::Real, |idx| {
        let prod: C64 = idx.iter().map(|&i| u[i]).product();
        r(2f64.sqrt() * (lambda * prod).re)
    })
}

pub fn w_state() -> Tensor {
    let s = 1.0 / 3f64.sqrt();
    qubits(3, Field::Real, &[("211", r(s)), ("121", r(s)), ("112", r(s))])
}

pub fn ghz_state(n: usize) -> Result<Tensor> {
    if n == 0 {
        return Err(Error::ParamOutOfRange(String::from("n must be at least 1")));
    }
    let s = 1.0 / 2f64.sqrt();
    let ones: String = "1".repeat(n);
    let twos: String = "2".repeat(n);
    Ok(qubits(n, Field::Real, &[(&ones, r(s)), (&twos, r(s))]))
}

pub fn m4_state() -> Tensor {
    let s = 1.0 / 6f64.sqrt();
    let omega = C64::from_polar(1.0, 2.0 * core::f64::consts::PI / 3.0);
    let omega2 = omega * omega;
    qubits(
        4,
        Field::Complex,
        &[
            ("1122", r(s)),
            ("2211", r(s)),
            ("2121", omega * s),
            ("1212", omega * s),
            ("2112", omega2 * s),
            ("1221", omega2 * s),
        ],
    )
}

/// Symmetric qubits used as nuclear/spectral benchmarks, rows 1–10.
pub fn sym_qubit(index: usize) -> Result<Tensor> {
    let s2 = 2f64.sqrt();
    let t = match index {
        1 => sym_qubits(3, &[("111", 1.0 / s2), ("222", 1.0 / s2)]),
        2 => sym_qubits(3, &[("112", 1.0 / 3f64.sqrt())]),
        3 => {
            let a = 1.0 / 20f64.sqrt();
            sym_qubits(3, &[("111", a), ("112", a), ("221", -2.0 * a), ("222", -2.0 * a)])
        }
        // printed to four digits; renormalized to a unit state
        4 => normalized(sym_qubits(3, &[("111", 0.3358), ("222", -0.4283), ("112", 0.4305), ("221", -0.2220)])),
        5 => sym_qubits(3, &[("112", 0.5), ("222", -0.5)]),
        6 => sym_qubits(4, &[("1112", 0.5)]),
        7 => sym_qubits(4, &[("1111", 1.0 / 3f64.sqrt()), ("2221", 0.5 * (2.0f64 / 3.0).sqrt())]),
        8 => sym_qubits(5, &[("11112", 1.0 / 5f64.sqrt())]),
        9 => {
            let a: f64 = 1.53154;
            let den = (1.0 + a * a).sqrt();
            sym_qubits(5, &[("11111", 1.0 / den), ("12222", a / (5f64.sqrt() * den))])
        }
        10 => {
            let v = 1.0 / (2.0 * 3f64.sqrt());
            sym_qubits(6, &[("111112", v), ("122222", v)])
        }
        _ => return Err(Error::ParamOutOfRange(format!("sym-qubit index {index} is outside 1..=10"))),
    };
    Ok(t)
}

/// Nonsymmetric qubits, rows 1–6.
pub fn nonsym_qubit(index: usize) -> Result<Tensor> {
    let h = r(0.5);
    let q = 1.0 / (2.0 * 2f64.sqrt());
    let t = match index {
        1 => qubits(4, Field::Real, &[("1111", h), ("1222", h), ("2112", h), ("2221", h)]),
        2 => qubits(
            4,
            Field::Real,
            &[("1111", h), ("2212", h), ("2122", r(q)), ("1221", r(q)), ("1122", r(q)), ("2221", r(-q))],
        ),
        3 => qubits(4, Field::Real, &[("1111", h), ("1212", h), ("2121", h), ("2222", h)]),
        4 => m4_state(),
        5 => qubits(
            5,
            Field::Real,
            &[
                ("21112", r(q)),
                ("12111", r(q)),
                ("11212", r(q)),
                ("11221", r(q)),
                ("22211", r(q)),
                ("22222", r(q)),
                ("21121", r(-q)),
                ("12122", r(-q)),
            ],
        ),
        6 => {
            let shape = Shape::new(vec![2; 6])?;
            let v = 1.0 / 8f64.sqrt();
            Tensor::from_fn(shape, Field::Real, |idx| if idx[..3] == idx[3..] { r(v) } else { r(0.0) })?
        }
        _ => return Err(Error::ParamOutOfRange(format!("nonsym-qubit index {index} is outside 1..=6"))),
    };
    Ok(t)
}

/// Two-qubit density with PPT failing exactly for b > 1/3.
pub fn werner_density(b: f64) -> Result<DensityTensor> {
    let d = (1.0 - b) / 4.0;
    let p = (1.0 + b) / 4.0;
    let o = -b / 2.0;
    let t = qubits(
        4,
        Field::Real,
        &[("1111", r(d)), ("2222", r(d)), ("1212", r(p)), ("2121", r(p)), ("1221", r(o)), ("2112", r(o))],
    );
    DensityTensor::from_tensor(t)
}

/// Bound-entangled 2×4 density (entangled for b ∈ (0, 1], separable at 0).
pub fn horodecki_density(b: f64) -> Result<DensityTensor> {
    let shape = Shape::new(vec![2, 4, 2, 4])?;
    let mut data = vec![r(0.0); shape.total_size()];
    let a = b / (7.0 * b + 1.0);
    let diag = (1.0 + b) / (2.0 * (7.0 * b + 1.0));
    let off = (1.0 - b * b).sqrt() / (2.0 * (7.0 * b + 1.0));
    let entries: [(&str, f64); 16] = [
        ("1111", a),
        ("1212", a),
        ("1313", a),
        ("1414", a),
        ("1122", a),
        ("1223", a),
        ("2222", a),
        ("2323", a),
        ("1324", a),
        ("2211", a),
        ("2312", a),
        ("2413", a),
        ("2121", diag),
        ("2424", diag),
        ("2124", off),
        ("2421", off),
    ];
    for (idx, v) in entries {
        let multi: Vec<usize> = idx.bytes().map(|c| usize::from(c - b'1')).collect();
        data[shape.flat_index(&multi)] = r(v);
    }
    DensityTensor::from_tensor(Tensor::new(shape, Field::Real, data)?)
}

pub fn known_state(name: &str, params: &StateParams) -> Result<KnownState> {
    let state = match name {
        "W" => KnownState::Pure(w_state()),
        "GHZ" => KnownState::Pure(ghz_state(params.n.unwrap_or(3))?),
        "T" => KnownState::Pure(t_state(params.n.unwrap_or(4), params.lambda.unwrap_or(r(1.0)))?),
        "M4" => KnownState::Pure(m4_state()),
        "sym-qubit" => KnownState::Pure(sym_qubit(index_param(params, 10)?)?),
        "nonsym-qubit" => KnownState::Pure(nonsym_qubit(index_param(params, 6)?)?),
        "werner" => KnownState::Density(werner_density(param_b(params)?)?),
        "horodecki-2x4" => KnownState::Density(horodecki_density(param_b(params)?)?),
        "sym4-max" => KnownState::Pure(sym_qubit(7)?),
        other => return Err(Error::UnknownState(String::from(other))),
    };
    Ok(state)
}

// ---------------------------------------------------------------------------
// extremal constants

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Exact,
    /// The true constant is at least the value.
    Lower,
    /// The true constant is at most the value.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub kind: BoundKind,
}

/// α(n,𝔽), the largest nuclear norm of a unit tensor, and β(n,𝔽), the
/// smallest spectral norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitBounds {
    pub alpha: BoundValue,
    pub beta: BoundValue,
}

fn exact_beta(dims: &[usize], field: Field) -> Option<f64> {
    let d = dims.len();
    if d == 1 {
        return Some(1.0);
    }
    if d == 2 {
        return Some(1.0 / (dims[0].min(dims[1]) as f64).sqrt());
    }
    if dims.iter().all(|&n| n == 2) {
        return match (field, d) {
            (Field::Real, _) => Some(2f64.powf((1.0 - d as f64) / 2.0)),
            (Field::Complex, 3) => Some(2.0 / 3.0),
            (Field::Complex, 4) => Some(2f64.sqrt() / 3.0),
            _ => None,
        };
    }
    None
}

/// Best lower bound on β by removing one mode at a time:
/// β(n₁,…,n_{d+1}) ≥ β(n₁,…,n_d)/√n_{d+1}.
fn beta_lower(dims: &[usize], field: Field) -> f64 {
    if let Some(b) = exact_beta(dims, field) {
        return b;
    }
    let mut best: f64 = 0.0;
    for j in 0..dims.len() {
        let mut sub = dims.to_vec();
        let removed = sub.remove(j);
        best = best.max(beta_lower(&sub, field) / (removed as f64).sqrt());
    }
    best
}

pub fn qubit_bounds(shape: &Shape, field: Field) -> QubitBounds {
    // size-one modes do not change either constant
    let dims: Vec<usize> = shape.dims().iter().copied().filter(|&n| n > 1).collect();
    if dims.is_empty() {
        let one = BoundValue { value: 1.0, kind: BoundKind::Exact };
        return QubitBounds { alpha: one, beta: one };
    }
    match exact_beta(&dims, field) {
        Some(b) => QubitBounds {
            alpha: BoundValue { value: 1.0 / b, kind: BoundKind::Exact },
            beta: BoundValue { value: b, kind: BoundKind::Exact },
        },
        None => {
            let b = beta_lower(&dims, field);
            QubitBounds {
                alpha: BoundValue { value: 1.0 / b, kind: BoundKind::Upper },
                beta: BoundValue { value: b, kind: BoundKind::Lower },
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn werner_trace_and_ppt() {
        for b in [0.0, 0.25, 0.5, 1.0] {
            let a = werner_density(b).unwrap();
            assert!((a.trace().re - 1.0).abs() < 1e-15);
            let ppt = ppt_check(&a, &[0]).unwrap();
            assert!((ppt.min_eigenvalue - (1.0 - 3.0 * b) / 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn horodecki_is_a_state() {
        for b in [0.0, 0.5, 1.0] {
            let a = horodecki_density(b).unwrap();
            assert!((a.trace().re - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn catalog_states_are_unit() {
        for i in 1..=10 {
            assert!((sym_qubit(i).unwrap().hs_norm() - 1.0).abs() < 1e-4, "row {i}");
        }
        for i in 1..=6 {
            assert!((nonsym_qubit(i).unwrap().hs_norm() - 1.0).abs() < 1e-12, "row {i}");
        }
        for n in 3..=5 {
            for lambda in [r(1.0), C64::new(0.0, -1.0)] {
                assert!((t_state(n, lambda).unwrap().hs_norm() - 1.0).abs() < 1e-12);
            }
        }
        assert!(matches!(known_state("nope", &StateParams::default()), Err(Error::UnknownState(_))));
        let bad = StateParams { b: Some(1.5), ..StateParams::default() };
        assert!(matches!(known_state("werner", &bad), Err(Error::ParamOutOfRange(_))));
    }

    #[test]
    fn bounds_table() {
        let q = |dims: &[usize], f| qubit_bounds(&Shape::new(dims.to_vec()).unwrap(), f);
        let b = q(&[2, 2, 2], Field::Complex);
        assert_eq!(b.alpha, BoundValue { value: 1.5, kind: BoundKind::Exact });
        let b = q(&[2, 2, 2, 2], Field::Complex);
        assert!((b.alpha.value - 3.0 / 2f64.sqrt()).abs() < 1e-12);
        let b = q(&[2, 2, 2, 2, 2], Field::Complex);
        assert_eq!(b.beta.kind, BoundKind::Lower);
        assert!((b.beta.value - 1.0 / 3.0).abs() < 1e-12);
        let b = q(&[3, 5], Field::Real);
        assert!((b.alpha.value - 3f64.sqrt()).abs() < 1e-12);
        let b = q(&[3, 3, 3], Field::Real);
        assert!((b.beta.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn partial_transpose_subset_validation() {
        let a = werner_density(0.2).unwrap();
        assert!(ppt_check(&a, &[]).is_err());
        assert!(ppt_check(&a, &[0, 1]).is_err());
        assert!(ppt_check(&a, &[2]).is_err());
    }
}
