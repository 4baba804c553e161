//! Simulation and analysis of a triply concurrent optical parametric
//! oscillator: three pump modes (1, 2, 3) each down-convert into a pair of
//! the three signal modes (4, 5, 6) inside a single cavity.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the physical parameters, the oscillation threshold and
//!   the semiclassical steady states on both sides of it.
//! * [`linearization`] builds the Ornstein-Uhlenbeck drift and diffusion
//!   matrices of the fluctuations, and from them stationary covariances,
//!   spectral matrices and measurable output spectra.
//! * [`quadrature`] describes linear combinations of field quadratures.
//! * [`criteria`] evaluates the van Loock-Furusawa tripartite entanglement
//!   spectra, the two three-mode EPR criteria and their closed forms.
//! * [`sde`] integrates the full positive-P stochastic equations and
//!   accumulates ensemble statistics.
//! * [`validation`] runs the end-to-end acceptance checks.
//!
//! Phase-space vectors use the interleaved ordering
//! `(α₁, α₁⁺, α₂, α₂⁺, …, α₆, α₆⁺)` everywhere; see [`model::Mode`].

// `!(x > 0.0)` is used on purpose throughout: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod linalg;
pub mod linearization;
pub mod model;
pub mod quadrature;
pub mod sde;
pub mod validation;

pub use error::{Error, Result};
pub use model::{Branch, Mode, SystemParams, SteadyState};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dimension of the doubled phase space.
pub const DIM: usize = 12;
