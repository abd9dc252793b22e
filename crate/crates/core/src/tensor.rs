//! Dense tensors over the real or complex field.
//!
//! Entries are stored row-major (last index fastest) as complex scalars;
//! the [`Field`] tag decides whether imaginary parts are admissible.
//! Modes are zero-based throughout the API.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn tag(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
        }
    }

    /// Rejects data with a nonzero imaginary part when the field is real.
    pub fn validate(self, data: &[C64]) -> Result<()> {
        if self == Field::Real {
            if let Some(index) = data.iter().position(|z| z.im != 0.0) {
                return Err(Error::RealWithImaginary { index });
            }
        }
        Ok(())
    }

    /// Field of the result of combining data over `self` and `other`.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    dims: Vec<usize>,
    size: usize,
}

impl Shape {
    /// A shape with positive dimensions. The empty shape is the 0-mode scalar.
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.iter().any(|&n| n == 0) {
            return Err(Error::InvalidShape { dims });
        }
        let mut size: usize = 1;
        for &n in &dims {
            size = match size.checked_mul(n) {
                Some(s) => s,
                None => return Err(Error::SizeOverflow { dims }),
            };
        }
        Ok(Shape { dims, size })
    }

    pub fn scalar() -> Self {
        Shape { dims: Vec::new(), size: 1 }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    /// N(n), the product of the dimensions.
    pub fn total_size(&self) -> usize {
        self.size
    }

    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            idx[k] = flat % self.dims[k];
            flat /= self.dims[k];
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(&self.dims)
            .fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn concat(&self, other: &Shape) -> Result<Shape> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Shape::new(dims)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.order() {
            return Err(Error::ModeOutOfRange { mode, order: self.order() });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    shape: Shape,
    field: Field,
    data: Vec<C64>,
}

impl Tensor {
    pub fn new(shape: Shape, field: Field, data: Vec<C64>) -> Result<Self> {
        if data.len() != shape.total_size() {
            return Err(Error::EntryCount { expected: shape.total_size(), got: data.len() });
        }
        field.validate(&data)?;
        Ok(Tensor { shape, field, data })
    }

    pub fn from_dims(dims: &[usize], field: Field, data: Vec<C64>) -> Result<Self> {
        Tensor::new(Shape::new(dims.to_vec())?, field, data)
    }

    pub fn from_real(dims: &[usize], data: &[f64]) -> Result<Self> {
        let data = data.iter().map(|&x| C64::new(x, 0.0)).collect();
        Tensor::from_dims(dims, Field::Real, data)
    }

    pub fn zeros(shape: Shape, field: Field) -> Self {
        let data = vec![C64::new(0.0, 0.0); shape.total_size()];
        Tensor { shape, field, data }
    }

    pub fn from_fn(shape: Shape, field: Field, mut f: impl FnMut(&[usize]) -> C64) -> Result<Self> {
        let data = (0..shape.total_size())
            .map(|flat| f(&shape.multi_index(flat)))
            .collect();
        Tensor::new(shape, field, data)
    }

    pub fn scalar(value: C64) -> Self {
        let field = if value.im == 0.0 { Field::Real } else { Field::Complex };
        Tensor { shape: Shape::scalar(), field, data: vec![value] }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dims(&self) -> &[usize] {
        self.shape.dims()
    }

    pub fn order(&self) -> usize {
        self.shape.order()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.data
    }

    pub fn get(&self, idx: &[usize]) -> C64 {
        self.data[self.shape.flat_index(idx)]
    }

    /// Re-tags the tensor. Tagging as real fails if any imaginary part is nonzero.
    pub fn with_field(mut self, field: Field) -> Result<Self> {
        field.validate(&self.data)?;
        self.field = field;
        Ok(self)
    }

    /// Checks that the tensor can be analyzed over `field`.
    pub fn require_field(&self, field: Field) -> Result<()> {
        match field {
            Field::Complex => Ok(()),
            Field::Real => Field::Real
                .validate(&self.data)
                .map_err(|_| Error::FieldMismatch("real norm requested for a tensor with complex entries")),
        }
    }

    pub fn scale(&self, c: C64) -> Tensor {
        let field = if c.im == 0.0 { self.field } else { Field::Complex };
        Tensor {
            shape: self.shape.clone(),
            field,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn conj(&self) -> Tensor {
        Tensor {
            shape: self.shape.clone(),
            field: self.field,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        self.same_shape(other)?;
        Ok(Tensor {
            shape: self.shape.clone(),
            field: self.field.join(other.field),
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Tensor) -> Result<Tensor> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    fn same_shape(&self, other: &Tensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch {
                left: self.dims().to_vec(),
                right: other.dims().to_vec(),
            });
        }
        Ok(())
    }

    /// ⟨self, y⟩ = Σ t · conj(y), conjugate-linear in `y`.
    pub fn inner(&self, y: &Tensor) -> Result<C64> {
        self.same_shape(y)?;
        Ok(self.data.iter().zip(&y.data).map(|(t, y)| t * y.conj()).sum())
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Tensor) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Sums `t` against `y` over the (ascending) `modes`, without conjugation.
    ///
    /// `y` must have the dimensions of the selected modes in order. The result
    /// lives on the remaining modes; contracting every mode yields a 0-mode
    /// tensor.
    pub fn contract(&self, y: &Tensor, modes: &[usize]) -> Result<Tensor> {
        for (pos, &m) in modes.iter().enumerate() {
            self.shape.check_mode(m)?;
            if pos > 0 && modes[pos - 1] >= m {
                return Err(Error::InvalidSubset { subset: modes.to_vec() });
            }
        }
        let selected: Vec<usize> = modes.iter().map(|&m| self.dims()[m]).collect();
        if selected != y.dims() {
            return Err(Error::ShapeMismatch { left: selected, right: y.dims().to_vec() });
        }
        let rest: Vec<usize> = (0..self.order()).filter(|m| !modes.contains(m)).collect();
        let out_shape = Shape::new(rest.iter().map(|&m| self.dims()[m]).collect())?;
        let mut out = vec![C64::new(0.0, 0.0); out_shape.total_size()];
        for (flat, &t) in self.data.iter().enumerate() {
            if t.re == 0.0 && t.im == 0.0 {
                continue;
            }
            let idx = self.shape.multi_index(flat);
            let yi = modes.iter().fold(0, |acc, &m| acc * self.dims()[m] + idx[m]);
            let oi = rest.iter().fold(0, |acc, &m| acc * self.dims()[m] + idx[m]);
            out[oi] += t * y.data[yi];
        }
        Ok(Tensor { shape: out_shape, field: self.field.join(y.field), data: out })
    }

    /// Materializes x₁ ⊗ … ⊗ x_d.
    pub fn outer(field: Field, factors: &[Vec<C64>]) -> Result<Tensor> {
        if factors.is_empty() {
            return Err(Error::EmptyFactors);
        }
        for f in factors {
            field.validate(f)?;
        }
        let shape = Shape::new(factors.iter().map(Vec::len).collect())?;
        let mut data = vec![C64::new(1.0, 0.0)];
        for f in factors {
            let mut next = Vec::with_capacity(data.len() * f.len());
            for &a in &data {
                next.extend(f.iter().map(|&b| a * b));
            }
            data = next;
        }
        Ok(Tensor { shape, field, data })
    }

    /// Mode-`mode` unfolding: row `i_mode`, columns over the remaining modes
    /// in ascending order with the last one fastest.
    pub fn unfold(&self, mode: usize) -> Result<DMatrix<C64>> {
        self.shape.check_mode(mode)?;
        let rows = self.dims()[mode];
        let cols = self.shape.total_size() / rows;
        let mut m = DMatrix::zeros(rows, cols);
        for (flat, &t) in self.data.iter().enumerate() {
            let idx = self.shape.multi_index(flat);
            let col = (0..self.order())
                .filter(|&j| j != mode)
                .fold(0, |acc, j| acc * self.dims()[j] + idx[j]);
            m[(idx[mode], col)] = t;
        }
        Ok(m)
    }

    /// Inverse of [`Tensor::unfold`].
    pub fn fold(m: &DMatrix<C64>, mode: usize, shape: Shape, field: Field) -> Result<Tensor> {
        shape.check_mode(mode)?;
        let rows = shape.dims()[mode];
        if m.nrows() != rows || m.ncols() * rows != shape.total_size() {
            return Err(Error::ShapeMismatch {
                left: vec![m.nrows(), m.ncols()],
                right: shape.dims().to_vec(),
            });
        }
        let dims = shape.dims().to_vec();
        Tensor::from_fn(shape, field, |idx| {
            let col = (0..dims.len())
                .filter(|&j| j != mode)
                .fold(0, |acc, j| acc * dims[j] + idx[j]);
            m[(idx[mode], col)]
        })
    }

    /// Multiplies mode `mode` by the matrix `m` (p × n_mode).
    pub fn mode_product(&self, mode: usize, m: &DMatrix<C64>) -> Result<Tensor> {
        let unfolded = self.unfold(mode)?;
        if m.ncols() != unfolded.nrows() {
            return Err(Error::ShapeMismatch {
                left: vec![m.nrows(), m.ncols()],
                right: self.dims().to_vec(),
            });
        }
        let product = m * unfolded;
        let mut dims = self.dims().to_vec();
        dims[mode] = m.nrows();
        let field = if m.iter().all(|z| z.im == 0.0) { self.field } else { Field::Complex };
        Tensor::fold(&product, mode, Shape::new(dims)?, field)
    }

    /// Tucker compression onto the column spaces of the mode unfoldings.
    ///
    /// Modes with full unfolding rank keep the identity basis.
    pub fn compress(&self) -> Result<Compression> {
        let mut core = self.clone();
        let mut bases = Vec::with_capacity(self.order());
        for mode in 0..self.order() {
            let unfolded = self.unfold(mode)?;
            let n = unfolded.nrows();
            let (u, rank) = linalg::column_space(&unfolded);
            if rank == n || rank == 0 {
                bases.push(None);
                continue;
            }
            let mut basis = u.columns(0, rank).into_owned();
            if self.field == Field::Real {
                basis.iter_mut().for_each(|z| z.im = 0.0);
            }
            core = core.mode_product(mode, &basis.adjoint())?;
            bases.push(Some(basis));
        }
        let core = core.with_field_lossy(self.field);
        Ok(Compression { original: self.shape.clone(), core, bases })
    }

    fn with_field_lossy(mut self, field: Field) -> Tensor {
        if field == Field::Real {
            self.data.iter_mut().for_each(|z| z.im = 0.0);
        }
        self.field = field;
        self
    }

    /// t ⊗ t′ on the concatenated shape.
    pub fn tensor_product(&self, other: &Tensor) -> Result<Tensor> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("tensor product of tensors over different fields"));
        }
        let shape = self.shape.concat(&other.shape)?;
        let mut data = Vec::with_capacity(shape.total_size());
        for &a in &self.data {
            data.extend(other.data.iter().map(|&b| a * b));
        }
        Ok(Tensor { shape, field: self.field, data })
    }

    /// Real tensor with a leading mode of size 2 holding real and imaginary parts.
    pub fn realify(&self) -> Result<Tensor> {
        let mut dims = vec![2];
        dims.extend_from_slice(self.dims());
        let shape = Shape::new(dims)?;
        let data = self
            .data
            .iter()
            .map(|z| C64::new(z.re, 0.0))
            .chain(self.data.iter().map(|z| C64::new(z.im, 0.0)))
            .collect();
        Ok(Tensor { shape, field: Field::Real, data })
    }

    /// Reorders modes: mode `k` of the result is mode `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Tensor> {
        let d = self.order();
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&p| p >= d || core::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidSubset { subset: perm.to_vec() });
        }
        let shape = Shape::new(perm.iter().map(|&p| self.dims()[p]).collect())?;
        let src = &self.shape;
        Tensor::from_fn(shape, self.field, |idx| {
            let mut orig = vec![0; d];
            for (k, &p) in perm.iter().enumerate() {
                orig[p] = idx[k];
            }
            self.data[src.flat_index(&orig)]
        })
    }

    /// Same entries viewed under a new shape of equal total size.
    pub fn reshape(&self, dims: &[usize]) -> Result<Tensor> {
        Tensor::from_dims(dims, self.field, self.data.clone())
    }
}

/// Core tensor plus per-mode isometries; `None` stands for the identity.
#[derive(Clone, Debug)]
pub struct Compression {
    original: Shape,
    core: Tensor,
    bases: Vec<Option<DMatrix<C64>>>,
}

impl Compression {
    pub fn core(&self) -> &Tensor {
        &self.core
    }

    pub fn original_shape(&self) -> &Shape {
        &self.original
    }

    /// Basis of mode `mode` as an n_mode × r_mode isometry.
    pub fn basis(&self, mode: usize) -> DMatrix<C64> {
        match &self.bases[mode] {
            Some(b) => b.clone(),
            None => DMatrix::identity(self.original.dims()[mode], self.original.dims()[mode]),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.bases.iter().all(Option::is_none)
    }

    /// Applies the isometries to a core-shaped tensor.
    pub fn expand(&self, core: &Tensor) -> Result<Tensor> {
        let mut t = core.clone();
        for (mode, basis) in self.bases.iter().enumerate() {
            if let Some(b) = basis {
                t = t.mode_product(mode, b)?;
            }
        }
        Ok(t.with_field_lossy(core.field()))
    }

    /// Maps a mode-`mode` factor of the core back to the original space.
    pub fn lift_factor(&self, mode: usize, x: &[C64]) -> Vec<C64> {
        match &self.bases[mode] {
            None => x.to_vec(),
            Some(b) => (0..b.nrows())
                .map(|i| (0..b.ncols()).map(|l| b[(i, l)] * x[l]).sum())
                .collect(),
        }
    }

    pub fn lift(&self, dec: &RankOneDecomposition) -> RankOneDecomposition {
        let terms = dec
            .terms
            .iter()
            .map(|term| RankOneTerm {
                factors: term
                    .factors
                    .iter()
                    .enumerate()
                    .map(|(mode, f)| self.lift_factor(mode, f))
                    .collect(),
            })
            .collect();
        RankOneDecomposition { shape: self.original.clone(), field: dec.field, terms }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankOneTerm {
    pub factors: Vec<Vec<C64>>,
}

impl RankOneTerm {
    pub fn norm_product(&self) -> f64 {
        self.factors.iter().map(|f| linalg::norm(f)).product()
    }

    pub fn materialize(&self, field: Field) -> Result<Tensor> {
        Tensor::outer(field, &self.factors)
    }
}

/// 𝒯 = Σᵢ ⊗ⱼ y_{j,i}.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneDecomposition {
    pub shape: Shape,
    pub field: Field,
    pub terms: Vec<RankOneTerm>,
}

impl RankOneDecomposition {
    pub fn new(shape: Shape, field: Field, terms: Vec<RankOneTerm>) -> Result<Self> {
        for term in &terms {
            if term.factors.len() != shape.order()
                || term.factors.iter().zip(shape.dims()).any(|(f, &n)| f.len() != n)
            {
                return Err(Error::ShapeMismatch {
                    left: term.factors.iter().map(Vec::len).collect(),
                    right: shape.dims().to_vec(),
                });
            }
            for f in &term.factors {
                field.validate(f)?;
            }
        }
        Ok(RankOneDecomposition { shape, field, terms })
    }

    /// Σᵢ ∏ⱼ ‖y_{j,i}‖, an upper bound on the nuclear norm.
    pub fn bound(&self) -> f64 {
        self.terms.iter().map(RankOneTerm::norm_product).sum()
    }

    pub fn materialize(&self) -> Tensor {
        let mut out = Tensor::zeros(self.shape.clone(), self.field);
        for term in &self.terms {
            let mut data = vec![C64::new(1.0, 0.0)];
            for f in &term.factors {
                let mut next = Vec::with_capacity(data.len() * f.len());
                for &a in &data {
                    next.extend(f.iter().map(|&b| a * b));
                }
                data = next;
            }
            for (o, v) in out.data.iter_mut().zip(data) {
                *o += v;
            }
        }
        out
    }

    /// Hilbert-Schmidt distance between the materialized sum and `target`.
    pub fn residual(&self, target: &Tensor) -> Result<f64> {
        Ok(self.materialize().sub(target)?.hs_norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn e(n: usize, i: usize) -> Vec<C64> {
        let mut v = vec![c(0.0, 0.0); n];
        v[i] = c(1.0, 0.0);
        v
    }

    fn w_state() -> Tensor {
        let s = 1.0 / 3f64.sqrt();
        let mut data = vec![c(0.0, 0.0); 8];
        data[4] = c(s, 0.0);
        data[2] = c(s, 0.0);
        data[1] = c(s, 0.0);
        Tensor::from_dims(&[2, 2, 2], Field::Real, data).unwrap()
    }

    #[test]
    fn shape_overflow_detected() {
        assert!(matches!(Shape::new(vec![usize::MAX, 2]), Err(Error::SizeOverflow { .. })));
        assert!(matches!(Shape::new(vec![2, 0]), Err(Error::InvalidShape { .. })));
    }

    #[test]
    fn real_tag_rejects_imaginary() {
        let r = Tensor::from_dims(&[2], Field::Real, vec![c(1.0, 0.0), c(0.0, 0.1)]);
        assert_eq!(r, Err(Error::RealWithImaginary { index: 1 }));
    }

    #[test]
    fn inner_product_basics() {
        let t = Tensor::outer(Field::Real, &[e(2, 0), e(2, 0)]).unwrap();
        assert_eq!(t.inner(&t).unwrap(), c(1.0, 0.0));
        let w = w_state();
        assert!((w.inner(&w).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let other = Tensor::zeros(Shape::new(vec![2, 2]).unwrap(), Field::Real);
        assert!(matches!(w.inner(&other), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(Tensor::zeros(Shape::new(vec![2, 3]).unwrap(), Field::Real).hs_norm(), 0.0);
        assert!((w_state().hs_norm() - 1.0).abs() < 1e-15);
        let ones = Tensor::from_real(&[2, 2, 2], &[1.0; 8]).unwrap();
        assert!((ones.hs_norm() - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn contract_examples() {
        let x = vec![c(0.6, 0.0), c(0.8, 0.0)];
        let y = vec![c(0.0, 1.0), c(0.0, 0.0)];
        let t = Tensor::outer(Field::Complex, &[x.clone(), y.clone()]).unwrap();
        // contracting against conj(y) collapses the unit factor
        let ybar = Tensor::from_dims(&[2], Field::Complex, y.iter().map(|z| z.conj()).collect()).unwrap();
        let r = t.contract(&ybar, &[1]).unwrap();
        assert_eq!(r.entries(), &x[..]);

        let w = w_state();
        let e1 = Tensor::from_real(&[2], &[1.0, 0.0]).unwrap();
        let r = w.contract(&e1, &[2]).unwrap().scale(c(3f64.sqrt(), 0.0));
        let expected = Tensor::from_real(&[2, 2], &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(r.max_abs_diff(&expected).unwrap() < 1e-15);

        let full = w.contract(&w.conj(), &[0, 1, 2]).unwrap();
        assert_eq!(full.order(), 0);
        assert!((full.entries()[0] - w.inner(&w).unwrap()).norm() < 1e-15);

        assert!(matches!(w.contract(&e1, &[3]), Err(Error::ModeOutOfRange { .. })));
        assert!(matches!(w.contract(&w, &[0]), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn outer_examples() {
        let t = Tensor::outer(Field::Real, &[e(2, 0), e(2, 1)]).unwrap();
        assert_eq!(t.get(&[0, 1]), c(1.0, 0.0));
        assert_eq!(t.hs_norm(), 1.0);
        let t = Tensor::outer(Field::Real, &[vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(3.0, 0.0)]])
            .unwrap();
        assert!((t.hs_norm() - 6.0).abs() < 1e-15);
        assert_eq!(Tensor::outer(Field::Real, &[]), Err(Error::EmptyFactors));
    }

    #[test]
    fn unfold_of_rank_one_is_rank_one() {
        let x = vec![c(1.0, 0.0), c(2.0, 0.0)];
        let y = vec![c(3.0, 0.0), c(4.0, 0.0), c(5.0, 0.0)];
        let t = Tensor::outer(Field::Real, &[x.clone(), y.clone()]).unwrap();
        let m = t.unfold(0).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(m[(i, j)], x[i] * y[j]);
            }
        }
        assert!(matches!(t.unfold(2), Err(Error::ModeOutOfRange { .. })));
    }

    #[test]
    fn w_unfoldings_have_rank_two() {
        let w = w_state();
        for mode in 0..3 {
            let (_, rank) = linalg::column_space(&w.unfold(mode).unwrap());
            assert_eq!(rank, 2);
        }
    }

    #[test]
    fn compress_examples() {
        let x = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let t = Tensor::outer(Field::Real, &[x.clone(), x.clone(), x.clone()]).unwrap();
        let comp = t.compress().unwrap();
        assert_eq!(comp.core().dims(), &[1, 1, 1]);
        assert!(comp.expand(comp.core()).unwrap().max_abs_diff(&t).unwrap() < 1e-12);

        let w = w_state();
        let comp = w.compress().unwrap();
        assert_eq!(comp.core().dims(), &[2, 2, 2]);
        assert!(comp.is_trivial());

        // slice 3 equals slice 1 along mode 0
        let mut data = vec![0.0; 12];
        let vals = [0.3, -0.1, 0.7, 0.2];
        for (s, v) in [(0usize, vals), (1, [0.5, 0.4, -0.6, 0.1]), (2, vals)] {
            data[s * 4..s * 4 + 4].copy_from_slice(&v);
        }
        let t = Tensor::from_real(&[3, 2, 2], &data).unwrap();
        let comp = t.compress().unwrap();
        assert_eq!(comp.core().dims(), &[2, 2, 2]);
        assert_eq!(comp.core().field(), Field::Real);
        assert!((comp.core().hs_norm() - t.hs_norm()).abs() < 1e-12);
        assert!(comp.expand(comp.core()).unwrap().max_abs_diff(&t).unwrap() < 1e-12);
    }

    #[test]
    fn tensor_product_of_vectors_is_outer() {
        let x = Tensor::from_real(&[2], &[1.0, 2.0]).unwrap();
        let y = Tensor::from_real(&[3], &[3.0, 4.0, 5.0]).unwrap();
        let xy = x.tensor_product(&y).unwrap();
        let o = Tensor::outer(Field::Real, &[x.entries().to_vec(), y.entries().to_vec()]).unwrap();
        assert_eq!(xy, o);
        let z = y.clone().with_field(Field::Complex).unwrap();
        assert!(matches!(x.tensor_product(&z), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn realify_blocks() {
        let t = Tensor::from_dims(&[2], Field::Complex, vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let r = t.realify().unwrap();
        assert_eq!(r.dims(), &[2, 2]);
        assert_eq!(&r.entries()[2..], &[c(0.0, 0.0), c(0.0, 0.0)]);
        let it = t.scale(c(0.0, 1.0)).realify().unwrap();
        // i·t: real block is -Im(t)=0, imaginary block is Re(t)
        assert_eq!(it.entries(), &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0)]);
        let t2 = Tensor::from_dims(&[2], Field::Complex, vec![c(0.0, 3.0), c(-1.0, 0.0)]).unwrap();
        let i2 = t2.scale(c(0.0, 1.0)).realify().unwrap();
        assert_eq!(i2.entries(), &[c(-3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]);
    }

    #[test]
    fn permute_moves_modes() {
        let t = Tensor::from_real(&[2, 3], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let p = t.permute(&[1, 0]).unwrap();
        assert_eq!(p.dims(), &[3, 2]);
        assert_eq!(p.get(&[2, 1]), t.get(&[1, 2]));
        assert!(t.permute(&[0, 0]).is_err());
    }

    #[test]
    fn decomposition_bound_and_materialize() {
        let shape = Shape::new(vec![2, 2]).unwrap();
        let dec = RankOneDecomposition::new(
            shape,
            Field::Real,
            vec![
                RankOneTerm { factors: vec![vec![c(2.0, 0.0), c(0.0, 0.0)], e(2, 0)] },
                RankOneTerm { factors: vec![e(2, 1), vec![c(0.0, 0.0), c(-3.0, 0.0)]] },
            ],
        )
        .unwrap();
        assert_eq!(dec.bound(), 5.0);
        let m = dec.materialize();
        assert_eq!(m.entries(), &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0)]);
        assert!(dec.bound() >= m.hs_norm());
    }
}
