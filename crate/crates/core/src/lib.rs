//! Spectral and nuclear norms of dense real and complex tensors.
//!
//! The crate computes lower bounds on the spectral norm (multistart
//! alternating power iteration), upper bounds on the nuclear norm
//! (alternating minimum-sum-of-norms steps, each a second-order cone
//! program), and builds entanglement tooling on top of them: density
//! tensors, separability checks, partial transposes and a catalog of
//! benchmark states with analytically known norms.
//!
//! Everything here is `no_std` + `alloc`. The default `std` feature adds
//! parallel restarts through rayon.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod linalg;
pub mod nuclear;
pub mod quantum;
pub mod random;
pub mod socp;
pub mod spectral;
pub mod sym;
pub mod tensor;

mod par;
mod barrier;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub use tensor::{Field, RankOneDecomposition, RankOneTerm, Shape, Tensor};
