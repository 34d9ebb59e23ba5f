//! Desk-scale numerical laboratory for the constructive side of Carleson
//! operator theory.
//!
//! Everything here lives on finite models: measure spaces are weighted
//! point clouds, integrals are weighted sums or fixed quadrature rules,
//! and suprema run over explicit finite grids. That makes each classical
//! inequality (Vitali covering, Hardy–Littlewood, Cotlar, weak (1,1),
//! van der Corput, ...) a concrete numeric check instead of a theorem.
//!
//! Module map:
//! - [`space`]: weighted point clouds, balls, Vitali selection, maximal
//!   functions, layer cake.
//! - [`kernels`]: the truncated Hilbert kernel, Dirichlet kernels, the
//!   dyadic partition of unity and its kernel slices, bump kernels.
//! - [`fourier`]: periodic signals, Fourier coefficients, partial sums,
//!   mollification, the averaged modulated projection.
//! - [`carleson`]: the real-line Carleson operator, truncated Hilbert
//!   transforms, nontangential maximal operators, weak-type and Cotlar
//!   experiments.
//! - [`czd`]: ball coverings of open sets and the Calderón–Zygmund
//!   decomposition, with the weak (1,1) experiment.
//! - [`grid`] / [`tiles`]: Christ-type dyadic grids on point clouds and
//!   tile structures over them, with exhaustive axiom verifiers.
//! - [`oscillatory`]: Lipschitz/Hölder norms, oscillatory integral
//!   bounds, the Lipschitz approximation of Hölder functions.
//! - [`scenario`]: the JSON-driven experiment runner behind the CLI.

// `!(x > 0)`-style guards reject NaN along with the out-of-domain sign;
// the suggested partial_cmp rewrite would lose that.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carleson;
pub mod czd;
pub mod error;
pub mod fourier;
pub mod grid;
pub mod kernels;
pub mod oscillatory;
pub mod quad;
pub mod rng;
pub mod scenario;
pub mod space;
pub mod tiles;
mod util;

pub use error::Error;
pub use util::IndexSet;

pub type Result<T> = std::result::Result<T, Error>;

/// Default doubling exponent; the real line satisfies the doubling
/// condition with exponent 1, which relaxes to 4.
pub const DEFAULT_A: u32 = 4;
