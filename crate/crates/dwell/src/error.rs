//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation is only defined in a restricted parameter regime
    /// (typically the quadratic regime U = 0).
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    /// A matrix that must be symplectic fails S^T Ω S = Ω.
    #[error("matrix is not symplectic (max deviation {deviation:.3e})")]
    NotSymplectic { deviation: f64 },

    /// A covariance matrix violates σ + iΩ ⪰ 0 beyond tolerance.
    #[error("unphysical covariance matrix (min symplectic eigenvalue {nu_min})")]
    Unphysical { nu_min: f64 },

    /// The drift matrix is not Hurwitz; no stationary covariance exists.
    #[error("no steady state: dynamics is not dissipative enough (γ₁ = γ₂ = 0 or singular drift)")]
    NoSteadyState,

    /// The fixed-step integrator could not proceed.
    #[error("integration failed at t = {t}: {reason}")]
    IntegrationFailure { t: f64, reason: String },

    /// Population leaked into the last retained Fock level beyond the safety bound.
    #[error("Fock truncation unsafe at t = {t}: tail mass {tail_mass:.3e} exceeds 1e-6")]
    TruncationUnsafe { t: f64, tail_mass: f64 },

    /// Two Fock-space states with different per-mode dimensions were combined.
    #[error("Fock cutoff mismatch: {left} vs {right}")]
    CutoffMismatch { left: usize, right: usize },

    /// A run configuration failed validation.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Filesystem failure while reading a config or writing output.
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
