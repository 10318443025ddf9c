//! # dwell
//!
//! Simulator for a dissipative bosonic double well: two tunnelling-coupled
//! modes, each exchanging particles with its own thermal reservoir.
//!
//! Two engines cover the physics:
//!
//! - a **Gaussian engine** for the quadratic regime (no self-interaction):
//!   exact closed-system propagators ([`closed`]), fixed-step integration of
//!   the covariance drift-diffusion equation and the analytic steady state
//!   ([`open`]);
//! - a **truncated Fock-space engine** ([`fock`]) integrating the full
//!   Lindblad master equation, which handles on-site self-interaction and
//!   doubles as a brute-force oracle for the Gaussian formulas.
//!
//! Diagnostics live in [`measures`] (Uhlmann fidelity, best-matching thermal
//! targets, Gaussian quantum discord, logarithmic negativity) and [`thermo`]
//! (heat fluxes, energy bookkeeping). The [`cli`] module backs the `dwell`
//! binary, which emits CSV data series for all of the above.
//!
//! Conventions: frequencies are rescaled by ω₁ (so ω₂ = 1 + Δ), times by
//! 1/ω₁, ħ = 1, and the vacuum covariance matrix is the identity.

pub mod cli;
pub mod closed;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod measures;
pub mod open;
pub mod params;
pub mod thermo;

pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, GaussianState, SymplecticMatrix};
pub use params::ModelParams;
