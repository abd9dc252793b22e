//! Symmetric tensors stored by their coefficients at sorted multi-indices.
//!
//! A symmetric 𝒮 ∈ Sᵈ𝔽ⁿ has C(n+d−1, d) free coefficients, one per multiset
//! i₁ ≤ … ≤ i_d. Coefficients are kept in lexicographic order of the sorted
//! tuples; [`exponents`] gives the monomial picture j₁,…,jₙ of each slot.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::{Field, Shape, Tensor};
use crate::C64;

/// Deviation tolerated when reading a dense tensor as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SymTensor {
    n: usize,
    d: usize,
    field: Field,
    coeffs: Vec<C64>,
}

/// All sorted multi-indices of length `d` over `0..n`, lexicographically.
pub fn multisets(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; d];
    if d == 0 {
        out.push(cur);
        return out;
    }
    if n == 0 {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next nondecreasing tuple
        let mut pos = d;
        while pos > 0 && cur[pos - 1] == n - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        let v = cur[pos - 1] + 1;
        for c in &mut cur[pos - 1..] {
            *c = v;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// j_r = number of occurrences of r in the sorted index.
pub fn exponents(n: usize, sorted: &[usize]) -> Vec<usize> {
    let mut j = vec![0; n];
    for &i in sorted {
        j[i] += 1;
    }
    j
}

/// d!/(j₁!⋯jₙ!), the number of distinct permutations of the index.
pub fn multiplicity(sorted: &[usize]) -> f64 {
    let mut denom = 1.0;
    let mut run = 1;
    for w in 1..=sorted.len() {
        if w < sorted.len() && sorted[w] == sorted[w - 1] {
            run += 1;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    factorial(sorted.len()) / denom
}

impl SymTensor {
    pub fn new(n: usize, d: usize, field: Field, coeffs: Vec<C64>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidShape { dims: vec![n; d] });
        }
        let expected = binomial(n + d - 1, d).ok_or(Error::SizeOverflow { dims: vec![n; d] })?;
        if coeffs.len() != expected {
            return Err(Error::EntryCount { expected, got: coeffs.len() });
        }
        field.validate(&coeffs)?;
        Ok(SymTensor { n, d, field, coeffs })
    }

    pub fn zeros(n: usize, d: usize, field: Field) -> Result<Self> {
        let count = binomial(n + d - 1, d).ok_or(Error::SizeOverflow { dims: vec![n; d] })?;
        SymTensor::new(n, d, field, vec![C64::new(0.0, 0.0); count])
    }

    /// Builds from (index, value) pairs; indices are sorted here, so any
    /// permutation names the same coefficient. Later pairs overwrite earlier.
    pub fn from_entries(n: usize, d: usize, field: Field, entries: &[(&[usize], C64)]) -> Result<Self> {
        let mut s = SymTensor::zeros(n, d, field)?;
        for (idx, v) in entries {
            if idx.len() != d || idx.iter().any(|&i| i >= n) {
                return Err(Error::InvalidSubset { subset: idx.to_vec() });
            }
            let pos = s.position(idx);
            s.coeffs[pos] = *v;
        }
        field.validate(&s.coeffs)?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient at any (not necessarily sorted) multi-index.
    pub fn get(&self, idx: &[usize]) -> C64 {
        self.coeffs[self.position(idx)]
    }

    /// Rank of the sorted multi-index in lexicographic order.
    pub fn position(&self, idx: &[usize]) -> usize {
        let mut sorted = idx.to_vec();
        sorted.sort_unstable();
        rank_sorted(self.n, &sorted)
    }

    pub fn multisets(&self) -> Vec<Vec<usize>> {
        multisets(self.n, self.d)
    }

    pub fn densify(&self) -> Tensor {
        let shape = Shape::new(vec![self.n; self.d]).expect("validated at construction");
        Tensor::from_fn(shape, self.field, |idx| self.get(idx)).expect("field already validated")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scale(&self, c: C64) -> SymTensor {
        let field = if c.im == 0.0 { self.field } else { Field::Complex };
        SymTensor {
            n: self.n,
            d: self.d,
            field,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }
}

fn rank_sorted(n: usize, sorted: &[usize]) -> usize {
    // count the tuples that precede `sorted`
    let d = sorted.len();
    let mut rank = 0;
    let mut lo = 0;
    for (pos, &v) in sorted.iter().enumerate() {
        let rest = d - pos - 1;
        for smaller in lo..v {
            rank += binomial(n - smaller + rest - 1, rest).unwrap_or(0);
        }
        lo = v;
    }
    rank
}

pub fn sym_from_dense(t: &Tensor) -> Result<SymTensor> {
    let d = t.order();
    let n = t.dims().first().copied().unwrap_or(0);
    if d == 0 || t.dims().iter().any(|&m| m != n) {
        return Err(Error::NonCubical { dims: t.dims().to_vec() });
    }
    let mut s = SymTensor::zeros(n, d, t.field())?;
    let mut deviation: f64 = 0.0;
    for (flat, &v) in t.entries().iter().enumerate() {
        let mut idx = t.shape().multi_index(flat);
        idx.sort_unstable();
        let reference = t.get(&idx);
        deviation = deviation.max((v - reference).norm());
        s.coeffs[rank_sorted(n, &idx)] = reference;
    }
    if deviation > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { deviation });
    }
    Ok(s)
}

/// Orthogonal projection of a cubical tensor onto the symmetric subspace.
pub fn project_symmetric(t: &Tensor) -> Result<SymTensor> {
    let d = t.order();
    let n = t.dims().first().copied().unwrap_or(0);
    if d == 0 || t.dims().iter().any(|&m| m != n) {
        return Err(Error::NonCubical { dims: t.dims().to_vec() });
    }
    let mut s = SymTensor::zeros(n, d, t.field())?;
    for (flat, &v) in t.entries().iter().enumerate() {
        let mut idx = t.shape().multi_index(flat);
        idx.sort_unstable();
        s.coeffs[rank_sorted(n, &idx)] += v;
    }
    for (c, idx) in s.coeffs.iter_mut().zip(multisets(n, d)) {
        *c /= multiplicity(&idx);
    }
    Ok(s)
}

/// √(Σ multiplicity(α)·|f_α|²), the Hilbert-Schmidt norm of the dense tensor.
pub fn sym_hs_norm(s: &SymTensor) -> f64 {
    s.coeffs
        .iter()
        .zip(multisets(s.n, s.d))
        .map(|(c, idx)| multiplicity(&idx) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Coefficient of sym(x₁,…,x_d) at the sorted index `alpha`.
pub(crate) fn sym_coefficient(xs: &[Vec<C64>], alpha: &[usize]) -> C64 {
    let d = xs.len();
    let a: Vec<C64> = (0..d * d).map(|p| xs[p % d][alpha[p / d]]).collect();
    linalg::permanent(d, &a) / factorial(d)
}

/// sym_d(x₁,…,x_d) = (1/d!) Σ_σ x_{σ(1)} ⊗ … ⊗ x_{σ(d)}.
pub fn symmetrize(field: Field, xs: &[Vec<C64>]) -> Result<SymTensor> {
    let n = xs.first().map(Vec::len).ok_or(Error::EmptyFactors)?;
    if xs.iter().any(|x| x.len() != n) {
        return Err(Error::ShapeMismatch {
            left: xs.iter().map(Vec::len).collect(),
            right: vec![n; xs.len()],
        });
    }
    for x in xs {
        field.validate(x)?;
    }
    let d = xs.len();
    let coeffs = multisets(n, d).iter().map(|alpha| sym_coefficient(xs, alpha)).collect();
    SymTensor::new(n, d, field, coeffs)
}

/// M(𝔽) = C(n+d−1, d−1), doubled over ℂ.
pub fn sym_term_budget(n: usize, d: usize, field: Field) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidShape { dims: vec![n; d] });
    }
    let base = binomial(n + d - 1, d - 1).ok_or(Error::SizeOverflow { dims: vec![n; d] })?;
    match field {
        Field::Real => Ok(base),
        Field::Complex => base.checked_mul(2).ok_or(Error::SizeOverflow { dims: vec![n; d] }),
    }
}

/// C(n+d−1, d), the number of free coefficients, doubled over ℂ.
pub fn sym_coefficient_budget(n: usize, d: usize, field: Field) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidShape { dims: vec![n; d] });
    }
    let base = binomial(n + d - 1, d).ok_or(Error::SizeOverflow { dims: vec![n; d] })?;
    match field {
        Field::Real => Ok(base),
        Field::Complex => base.checked_mul(2).ok_or(Error::SizeOverflow { dims: vec![n; d] }),
    }
}

/// ε·⊗ᵈx.
#[derive(Clone, Debug, PartialEq)]
pub struct SymRankOneTerm {
    pub vector: Vec<C64>,
    pub sign: i8,
}

impl SymRankOneTerm {
    pub fn norm_power(&self, d: usize) -> f64 {
        linalg::norm(&self.vector).powi(d as i32)
    }

    pub fn to_sym(&self, field: Field, d: usize) -> Result<SymTensor> {
        let xs = vec![self.vector.clone(); d];
        Ok(symmetrize(field, &xs)?.scale(C64::new(f64::from(self.sign), 0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn multiset_enumeration() {
        let m = multisets(2, 3);
        assert_eq!(m, vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]]);
        assert_eq!(multisets(3, 2).len(), 6);
        for (pos, idx) in multisets(3, 4).iter().enumerate() {
            assert_eq!(rank_sorted(3, idx), pos);
        }
    }

    #[test]
    fn w_has_one_coefficient() {
        let s = 1.0 / 3f64.sqrt();
        let mut data = vec![c(0.0); 8];
        data[1] = c(s);
        data[2] = c(s);
        data[4] = c(s);
        let w = Tensor::from_dims(&[2, 2, 2], Field::Real, data).unwrap();
        let sym = sym_from_dense(&w).unwrap();
        let nonzero: Vec<_> = sym.coeffs().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(sym.get(&[1, 0, 0]), c(s));
        assert!((sym_hs_norm(&sym) - 1.0).abs() < 1e-15);
        assert_eq!(sym.densify(), w);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let t = Tensor::from_real(&[2, 2], &[1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(matches!(sym_from_dense(&t), Err(Error::NotSymmetric { .. })));
        let t = Tensor::from_real(&[2, 3], &[0.0; 6]).unwrap();
        assert!(matches!(sym_from_dense(&t), Err(Error::NonCubical { .. })));
        let p = project_symmetric(&Tensor::from_real(&[2, 2], &[1.0, 0.5, 0.0, 1.0]).unwrap()).unwrap();
        assert_eq!(p.get(&[0, 1]), c(0.25));
    }

    #[test]
    fn symmetrize_examples() {
        let e1 = vec![c(1.0), c(0.0)];
        let e2 = vec![c(0.0), c(1.0)];
        let s = symmetrize(Field::Real, &[e1.clone(), e1.clone(), e2.clone()]).unwrap();
        let dense = s.densify();
        for idx in [[0, 0, 1], [0, 1, 0], [1, 0, 0]] {
            assert!((dense.get(&idx) - c(1.0 / 3.0)).norm() < 1e-15);
        }
        assert_eq!(dense.get(&[0, 0, 0]), c(0.0));

        let x = vec![c(0.3), c(-0.7)];
        let s = symmetrize(Field::Real, &[x.clone(), x.clone(), x.clone()]).unwrap();
        let o = Tensor::outer(Field::Real, &[x.clone(), x.clone(), x]).unwrap();
        assert!(s.densify().max_abs_diff(&o).unwrap() < 1e-15);
    }

    #[test]
    fn budgets() {
        assert_eq!(sym_term_budget(2, 3, Field::Real).unwrap(), 6);
        assert_eq!(sym_term_budget(2, 2, Field::Complex).unwrap(), 6);
        assert_eq!(sym_term_budget(1, 4, Field::Real).unwrap(), 4);
        assert_eq!(sym_term_budget(1, 4, Field::Complex).unwrap(), 8);
        assert_eq!(sym_coefficient_budget(2, 3, Field::Real).unwrap(), 4);
        assert_eq!(multiplicity(&[0, 0, 1]), 3.0);
        assert_eq!(multiplicity(&[0, 1, 2, 2]), 12.0);
    }
}
