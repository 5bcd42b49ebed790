//! Multivariate cosine lattice series
//! `F_d(θ) = Σ_{z≠0} ‖z‖^{-(d+α)}(1 - cos⟨z,θ⟩)` and their small-θ asymptotics.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod combinatorics;
pub mod decomposition;
pub mod error;
pub mod quadrature;
pub mod scalar;
pub mod series;
pub mod special;
pub mod summation;

pub use error::{Error, Result};
pub use scalar::Real;
pub use special::{AlphaParam, Regime};

pub type Point64 = series::Point<f64>;
pub type AlphaParam64 = special::AlphaParam<f64>;
pub type ErrorBudget64 = series::ErrorBudget<f64>;
pub type SeriesValue64 = series::SeriesValue<f64>;
pub type CoefficientModel64 = series::CoefficientModel<f64>;
