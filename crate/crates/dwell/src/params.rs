//! Model parameters of the dissipative two-site Bose-Hubbard system.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensionless parameters of the two-site Bose-Hubbard model, all rescaled
/// by the single-atom energy ω₁ of the first well (times are in units of
/// 1/ω₁ throughout).
///
/// The second well sits at ω₂/ω₁ = 1 + Δ. Each well exchanges particles
/// incoherently with its own reservoir at rate γ_j and thermal occupation
/// n̄_j.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Energy bias Δ between the wells, ω₂/ω₁ = 1 + Δ. Must satisfy Δ > −1.
    pub delta: f64,
    /// Tunnelling rate J = 𝒥/ω₁.
    pub j: f64,
    /// On-site self-interaction U/ω₁. The Gaussian engines require U = 0;
    /// the Fock-space engine accepts any U.
    pub u: f64,
    /// Damping rate of well 1, γ₁/ω₁ ≥ 0.
    pub gamma1: f64,
    /// Damping rate of well 2, γ₂/ω₁ ≥ 0.
    pub gamma2: f64,
    /// Thermal occupation of the reservoir attached to well 1, n̄₁ ≥ 0.
    pub nbar1: f64,
    /// Thermal occupation of the reservoir attached to well 2, n̄₂ ≥ 0.
    pub nbar2: f64,
}

impl ModelParams {
    /// Validated constructor.
    pub fn new(
        delta: f64,
        j: f64,
        u: f64,
        gamma1: f64,
        gamma2: f64,
        nbar1: f64,
        nbar2: f64,
    ) -> Result<Self> {
        let p = Self { delta, j, u, gamma1, gamma2, nbar1, nbar2 };
        p.validate()?;
        Ok(p)
    }

    /// Convenience constructor for the common symmetric-damping case.
    pub fn symmetric(delta: f64, j: f64, gamma: f64, nbar1: f64, nbar2: f64) -> Result<Self> {
        Self::new(delta, j, 0.0, gamma, gamma, nbar1, nbar2)
    }

    /// Check all parameter invariants: finiteness, Δ > −1, nonnegative rates
    /// and occupations.
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("delta", self.delta),
            ("j", self.j),
            ("u", self.u),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("nbar1", self.nbar1),
            ("nbar2", self.nbar2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be finite, got {v}")));
            }
        }
        if self.delta <= -1.0 {
            return Err(Error::Domain(format!(
                "delta must be > -1 so that ω₂ > 0, got {}",
                self.delta
            )));
        }
        for (name, v) in [
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
            ("nbar1", self.nbar1),
            ("nbar2", self.nbar2),
        ] {
            if v < 0.0 {
                return Err(Error::Domain(format!("{name} must be ≥ 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Second-well frequency ω₂ = 1 + Δ in units of ω₁.
    pub fn omega2(&self) -> f64 {
        1.0 + self.delta
    }

    /// Error unless U = 0 (the regime covered by the quadratic engines).
    pub fn require_quadratic(&self) -> Result<()> {
        if self.u != 0.0 {
            return Err(Error::UnsupportedRegime(format!(
                "operation requires U = 0, got U = {}; use the Fock-space engine",
                self.u
            )));
        }
        Ok(())
    }
}
