use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid shape {dims:?}: every dimension must be positive")]
    InvalidShape { dims: Vec<usize> },
    #[error("total size of shape {dims:?} overflows usize")]
    SizeOverflow { dims: Vec<usize> },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("mode {mode} out of range for order {order}")]
    ModeOutOfRange { mode: usize, order: usize },
    #[error("real-tagged data has a nonzero imaginary part at entry {index}")]
    RealWithImaginary { index: usize },
    #[error("field mismatch: {0}")]
    FieldMismatch(&'static str),
    #[error("empty factor list")]
    EmptyFactors,
    #[error("operation undefined for the zero tensor")]
    ZeroTensor,
    #[error("tensor is not cubical: {dims:?}")]
    NonCubical { dims: Vec<usize> },
    #[error("tensor is not symmetric: max deviation {deviation:e}")]
    NotSymmetric { deviation: f64 },
    #[error("expected a unit state, Hilbert-Schmidt norm is {norm}")]
    NotUnitState { norm: f64 },
    #[error("affine constraint is infeasible: residual {residual:e}")]
    Infeasible { residual: f64 },
    #[error("term budget {budget} exceeds the configured cap {cap}")]
    BudgetExceeded { budget: usize, cap: usize },
    #[error("decomposition has {terms} terms, more than the budget {budget}")]
    TooManyTerms { terms: usize, budget: usize },
    #[error("invalid probabilities: {0}")]
    InvalidProbabilities(&'static str),
    #[error("state {index} is not a unit product state")]
    NotProductState { index: usize },
    #[error("tensor is not hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("tensor is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },
    #[error("invalid density layout: {0}")]
    InvalidDensity(&'static str),
    #[error("invalid mode subset {subset:?}")]
    InvalidSubset { subset: Vec<usize> },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("invalid options: {0}")]
    InvalidOptions(&'static str),
    #[error("numerical failure: {0}")]
    Numerical(&'static str),
}
