//! Numerical checks of context-independent value assignments for the
//! position and momentum of a single particle.
//!
//! If every linear form `alpha X + beta P` carried a definite value, additive
//! across commuting contexts, the value of `S = X + P` would be the sum of
//! independently distributed values of `X` and `P`. Its distribution would be
//! the convolution of the position and momentum densities, with variance
//! `var_x + var_p`. Quantum mechanics gives `var_x + var_p + 2 C` instead,
//! where `C` is the symmetrized position-momentum covariance. This crate
//! computes both sides on a grid and quantifies the gap.
//!
//! * [`algebra`]: exact commutators of linear forms and the two-mode
//!   commuting diagram that forces additivity.
//! * [`state`]: grid wavefunctions, their position / momentum / quadrature
//!   densities and moments.
//! * [`putative`]: the convolution prediction, Monte Carlo sampling of it,
//!   and the variance verdict.
//! * [`analysis`]: Gaussian closed forms, total variation distance, and the
//!   end-to-end report.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod analysis;
pub mod distribution;
pub mod error;
pub mod grid;
pub mod putative;
pub mod scalar;
pub mod state;
pub mod stats;

pub use algebra::{
    commutator_coefficient, commuting_decomposition, fig1_contexts, is_context, ContextSet,
    DecompositionWitness, Fig1Variant, LinearForm,
};
pub use distribution::{Cumulative, Distribution, Variable};
pub use error::{Error, Result};
pub use grid::{GridSpec, Lattice};
pub use scalar::{AlgebraScalar, Real};
pub use state::{
    make_gaussian, moments, momentum_distribution, position_distribution, quadrature_distribution,
    MomentSummary, WaveFunction,
};

/// Exact coefficients for the commutator algebra.
pub type Rational = num_rational::Rational64;
pub type RationalForm = LinearForm<Rational>;

pub type Grid64 = GridSpec<f64>;
pub type WaveFunction64 = WaveFunction<f64>;
pub type Distribution64 = Distribution<f64>;
pub type Moments64 = MomentSummary<f64>;

pub type Grid32 = GridSpec<f32>;
pub type WaveFunction32 = WaveFunction<f32>;
pub type Distribution32 = Distribution<f32>;
