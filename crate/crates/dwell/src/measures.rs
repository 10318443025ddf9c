//! Gaussian-state diagnostics: Uhlmann fidelity, best-matching thermal
//! targets, Gaussian quantum discord and logarithmic negativity.
//!
//! The von Neumann entropy of a Gaussian state is Σ_k h(ν_k) over its
//! symplectic eigenvalues, with
//!
//!   h(x) = ((x+1)/2) ln((x+1)/2) − ((x−1)/2) ln((x−1)/2),
//!
//! evaluated in nats (h(1) = 0 by limit). All formulas below assume the
//! σ_vac = 𝟙 convention used across this crate.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    symplectic_eigenvalues_checked, symplectic_form, CovarianceMatrix, PHYSICAL_TOL,
};

/// Entropy contribution of one mode with symplectic eigenvalue `x`, in nats.
///
/// Arguments below 1 + 10⁻¹² collapse to the x → 1 limit (zero) so that
/// eigenvalues grazing 1 from integration rounding cannot produce NaN.
pub fn symplectic_entropy(x: f64) -> f64 {
    if x <= 1.0 + 1e-12 {
        return 0.0;
    }
    let up = 0.5 * (x + 1.0);
    let dn = 0.5 * (x - 1.0);
    up * up.ln() - dn * dn.ln()
}

/// Which well a Gaussian measurement is performed on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasuredWell {
    One,
    Two,
}

/// Which branch of the conditional-entropy minimum applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscordBranch {
    /// (I₄ − I₁I₂)² ≤ (1 + I₁) I₃² (I₂ + I₄): the constrained closed form.
    First,
    /// The generic minimum over Gaussian measurements.
    Second,
}

impl DiscordBranch {
    pub fn index(&self) -> u8 {
        match self {
            DiscordBranch::First => 1,
            DiscordBranch::Second => 2,
        }
    }
}

/// Gaussian quantum discord together with the invariants that produced it.
///
/// The block determinants are reported with the measured well in the leading
/// block: `i1` is the determinant of the measured well's 2×2 block, `i2` the
/// unmeasured well's, `i3` the cross block's and `i4` = det σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Discord in nats, clamped at 0 from tiny negative rounding.
    pub value: f64,
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    /// Smaller symplectic eigenvalue of the full covariance matrix.
    pub d_minus: f64,
    /// Larger symplectic eigenvalue of the full covariance matrix.
    pub d_plus: f64,
    pub branch: DiscordBranch,
}

impl DiscordResult {
    /// The same discord expressed in bits: changing the logarithm base only
    /// rescales h, hence the value, by 1/ln 2.
    pub fn value_bits(&self) -> f64 {
        self.value / std::f64::consts::LN_2
    }
}

/// Uhlmann fidelity of two zero-displacement two-mode Gaussian states.
///
/// Evaluated from the symplectic invariants of the pair (with σ halved into
/// the σ_vac = 𝟙/2 convention where the two-mode closed form is usually
/// stated):
///
/// ```text
/// Δ = det((σ₁+σ₂)/2)
/// Γ = det(Ωσ₁Ωσ₂ − 𝟙)/16
/// Λ = Π_k (ν_k² − 1)(μ_k² − 1)/16        (symplectic spectra of σ₁, σ₂)
/// F = [√Γ + √Λ − √((√Γ + √Λ)² − Δ)]⁻¹
/// ```
///
/// The truncated-Fock-space Uhlmann fidelity is the independent oracle for
/// this expression.
pub fn gaussian_fidelity(sigma1: &CovarianceMatrix, sigma2: &CovarianceMatrix) -> Result<f64> {
    sigma1.require_physical()?;
    sigma2.require_physical()?;

    let m1 = sigma1.matrix();
    let m2 = sigma2.matrix();
    let omega = symplectic_form();

    let delta = ((m1 + m2) * 0.5).determinant();
    let gamma = ((omega * m1 * omega * m2) - Matrix4::identity()).determinant() / 16.0;
    let (nu1, nu2) = sigma1.symplectic_eigenvalues();
    let (mu1, mu2) = sigma2.symplectic_eigenvalues();
    let lambda = (nu1 * nu1 - 1.0).max(0.0)
        * (nu2 * nu2 - 1.0).max(0.0)
        * (mu1 * mu1 - 1.0).max(0.0)
        * (mu2 * mu2 - 1.0).max(0.0)
        / 16.0;

    let s = gamma.max(0.0).sqrt() + lambda.max(0.0).sqrt();
    let rest = (s * s - delta).max(0.0).sqrt();
    let denom = s - rest;
    if !(denom > 0.0) {
        return Err(Error::Domain(format!(
            "degenerate fidelity denominator {denom}; states too singular"
        )));
    }
    Ok((1.0 / denom).clamp(0.0, 1.0 + 1e-9).min(1.0))
}

/// A thermal reference state: globally thermal at occupation μ, or a product
/// of locally thermal states at (μ₁, μ₂).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalTarget {
    Global { mu: f64 },
    Local { mu1: f64, mu2: f64 },
}

impl ThermalTarget {
    pub fn covariance(&self) -> Result<CovarianceMatrix> {
        match *self {
            ThermalTarget::Global { mu } => CovarianceMatrix::thermal(mu, mu),
            ThermalTarget::Local { mu1, mu2 } => CovarianceMatrix::thermal(mu1, mu2),
        }
    }
}

/// Family of thermal targets to maximize fidelity over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Global,
    Local,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of a unimodal function on [lo, hi].
fn golden_max(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let mut a = hi - GOLDEN * (hi - lo);
    let mut b = lo + GOLDEN * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while hi - lo > 1e-11 {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + GOLDEN * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - GOLDEN * (hi - lo);
            fa = f(a);
        }
    }
    let mid = 0.5 * (lo + hi);
    (mid, f(mid))
}

/// Maximize the fidelity between `sigma` and a thermal target over the
/// target occupations: a 1-D golden-section search for the global family, a
/// golden-section coordinate descent for the local one. The search interval
/// is μ ∈ [0, 4(n̄₁^eff + n̄₂^eff + 1)], which safely brackets the optimum.
pub fn max_fidelity_thermal(
    sigma: &CovarianceMatrix,
    kind: TargetKind,
) -> Result<(ThermalTarget, f64)> {
    sigma.require_physical()?;
    let (n1, n2) = sigma.local_occupations();
    let hi = 4.0 * (n1.max(0.0) + n2.max(0.0) + 1.0);

    match kind {
        TargetKind::Global => {
            let f = |mu: f64| {
                let target = CovarianceMatrix::thermal(mu, mu).expect("mu in range");
                gaussian_fidelity(sigma, &target).unwrap_or(0.0)
            };
            let (mu, best) = golden_max(&f, 0.0, hi);
            Ok((ThermalTarget::Global { mu }, best))
        }
        TargetKind::Local => {
            let f = |mu1: f64, mu2: f64| {
                let target = CovarianceMatrix::thermal(mu1, mu2).expect("mu in range");
                gaussian_fidelity(sigma, &target).unwrap_or(0.0)
            };
            let mut mu1 = n1.max(0.0);
            let mut mu2 = n2.max(0.0);
            let mut best = f(mu1, mu2);
            for _ in 0..60 {
                let (m1, _) = golden_max(&|x| f(x, mu2), 0.0, hi);
                let (m2, fb) = golden_max(&|y| f(m1, y), 0.0, hi);
                mu1 = m1;
                mu2 = m2;
                if fb - best < 1e-13 {
                    best = best.max(fb);
                    break;
                }
                best = fb;
            }
            Ok((ThermalTarget::Local { mu1, mu2 }, best))
        }
    }
}

/// Gaussian quantum discord with measurements on well 2.
pub fn gaussian_discord(sigma: &CovarianceMatrix) -> Result<DiscordResult> {
    gaussian_discord_measuring(sigma, MeasuredWell::Two)
}

/// Gaussian quantum discord of a two-mode state with Gaussian measurements
/// on the chosen well. Discord is asymmetric, so both directions are exposed.
///
/// With the measured well arranged into the leading block of
/// S = [[A, C], [Cᵀ, B]] and I₁ = det A, I₂ = det B, I₃ = det C, I₄ = det S:
///
///   𝒟 = h(√I₁) − h(d₋) − h(d₊) + h(√E_min),
///
/// where d±² = (Λ ± √(Λ² − 4I₄))/2 with Λ = I₁ + I₂ + 2I₃ are the
/// symplectic eigenvalues of S, and E_min is the minimal conditional
/// determinant
///
/// ```text
/// (I₄ − I₁I₂)² ≤ (1+I₁) I₃² (I₂+I₄):
///     E_min = [2I₃² + (I₁−1)(I₄−I₂) + 2|I₃|√(I₃² + (I₁−1)(I₄−I₂))] / (I₁−1)²
/// otherwise:
///     E_min = [I₁I₂ − I₃² + I₄ − √(I₃⁴ + (I₄−I₁I₂)² − 2I₃²(I₁I₂+I₄))] / (2I₁)
/// ```
pub fn gaussian_discord_measuring(
    sigma: &CovarianceMatrix,
    well: MeasuredWell,
) -> Result<DiscordResult> {
    sigma.require_physical()?;
    let m = match well {
        MeasuredWell::One => *sigma.matrix(),
        MeasuredWell::Two => swap_wells(sigma.matrix()),
    };

    let a = m.fixed_view::<2, 2>(0, 0).into_owned();
    let b = m.fixed_view::<2, 2>(2, 2).into_owned();
    let c: Matrix2<f64> = m.fixed_view::<2, 2>(0, 2).into_owned();
    let i1 = a.determinant();
    let i2 = b.determinant();
    let i3 = c.determinant();
    let i4 = m.determinant();

    let (d_plus, d_minus) = symplectic_eigenvalues_checked(&m)?;
    if d_minus < 1.0 - PHYSICAL_TOL {
        return Err(Error::Unphysical { nu_min: d_minus });
    }

    let (e_min, branch) = if i3.abs() < 1e-24 || (i1 - 1.0).abs() < 1e-12 {
        // No cross correlations (or a pure measured well, which forces a
        // product state): measuring cannot disturb the other well.
        (i2, DiscordBranch::First)
    } else if (i4 - i1 * i2).powi(2) <= (1.0 + i1) * i3 * i3 * (i2 + i4) {
        let inner = (i3 * i3 + (i1 - 1.0) * (i4 - i2)).max(0.0);
        let num = 2.0 * i3 * i3 + (i1 - 1.0) * (i4 - i2) + 2.0 * i3.abs() * inner.sqrt();
        (num / ((i1 - 1.0) * (i1 - 1.0)), DiscordBranch::First)
    } else {
        let inner =
            (i3.powi(4) + (i4 - i1 * i2).powi(2) - 2.0 * i3 * i3 * (i1 * i2 + i4)).max(0.0);
        let num = i1 * i2 - i3 * i3 + i4 - inner.sqrt();
        (num / (2.0 * i1), DiscordBranch::Second)
    };

    let raw = symplectic_entropy(i1.max(0.0).sqrt()) - symplectic_entropy(d_minus)
        - symplectic_entropy(d_plus)
        + symplectic_entropy(e_min.max(0.0).sqrt());
    if raw < -1e-12 {
        return Err(Error::Domain(format!("discord evaluated to {raw}, below -1e-12")));
    }

    Ok(DiscordResult { value: raw.max(0.0), i1, i2, i3, i4, d_minus, d_plus, branch })
}

fn swap_wells(m: &Matrix4<f64>) -> Matrix4<f64> {
    let swap = Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        1.0, 0.0, 0.0, 0.0, //
        0.0, 1.0, 0.0, 0.0,
    );
    swap * m * swap
}

/// Logarithmic negativity from the positive-partial-transpose criterion:
/// E_N = max(0, −ln ν̃₋) with ν̃₋ the smaller symplectic eigenvalue of the
/// covariance matrix after partial transposition (p₂ → −p₂). Zero exactly
/// when the two-mode Gaussian state is separable.
pub fn log_negativity(sigma: &CovarianceMatrix) -> Result<f64> {
    sigma.require_physical()?;
    let pt = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
    let transposed = pt * sigma.matrix() * pt;
    let (_, nu_min) = symplectic_eigenvalues_checked(&transposed)?;
    if !(nu_min > 0.0) {
        return Err(Error::Domain("partial transpose has a vanishing eigenvalue".into()));
    }
    Ok((-nu_min.ln()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{rotation_matrix, GaussianState, SymplecticMatrix};
    use crate::open::{steady_state, evolve};
    use crate::params::ModelParams;
    use approx::assert_abs_diff_eq;

    fn thermal(n1: f64, n2: f64) -> CovarianceMatrix {
        CovarianceMatrix::thermal(n1, n2).unwrap()
    }

    #[test]
    fn entropy_term_limits() {
        assert_eq!(symplectic_entropy(1.0), 0.0);
        assert_eq!(symplectic_entropy(1.0 + 5e-13), 0.0);
        assert!(symplectic_entropy(3.0) > 0.0);
        // h(3) = 2 ln 2 − 1 ln 1 = 2 ln 2
        assert_abs_diff_eq!(symplectic_entropy(3.0), 2.0 * 2.0_f64.ln(), epsilon = 1e-14);
    }

    #[test]
    fn fidelity_of_identical_states_is_one() {
        let s = thermal(1.0, 2.0);
        assert_abs_diff_eq!(gaussian_fidelity(&s, &s).unwrap(), 1.0, epsilon = 1e-10);
        let t = SymplecticMatrix::mixing(-0.7).unwrap();
        let mixed = t.apply(&GaussianState::thermal(0.5, 3.0).unwrap()).cov;
        assert_abs_diff_eq!(gaussian_fidelity(&mixed, &mixed).unwrap(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn fidelity_vacuum_vs_unit_thermal_is_quarter() {
        // Per mode 1/(1+n̄) = 1/2; two modes give 1/4. Cross-checked against
        // the Fock-space Uhlmann oracle elsewhere.
        let f = gaussian_fidelity(&CovarianceMatrix::vacuum(), &thermal(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(f, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded() {
        let pairs = [
            (thermal(1.0, 2.0), thermal(2.0, 1.0)),
            (thermal(0.0, 0.5), thermal(3.0, 0.2)),
            (
                SymplecticMatrix::mixing(-0.4)
                    .unwrap()
                    .apply(&GaussianState::thermal(1.0, 2.0).unwrap())
                    .cov,
                thermal(1.5, 1.5),
            ),
        ];
        for (a, b) in pairs {
            let fab = gaussian_fidelity(&a, &b).unwrap();
            let fba = gaussian_fidelity(&b, &a).unwrap();
            assert_abs_diff_eq!(fab, fba, epsilon = 1e-10);
            assert!((0.0..=1.0).contains(&fab));
        }
    }

    #[test]
    fn fidelity_one_only_for_equal_states() {
        let a = thermal(1.0, 2.0);
        let b = thermal(1.0, 2.0001);
        let f = gaussian_fidelity(&a, &b).unwrap();
        assert!(f < 1.0 - 1e-10);
    }

    #[test]
    fn max_fidelity_recovers_global_thermal_input() {
        let s = thermal(1.7, 1.7);
        let (target, best) = max_fidelity_thermal(&s, TargetKind::Global).unwrap();
        match target {
            ThermalTarget::Global { mu } => assert_abs_diff_eq!(mu, 1.7, epsilon = 1e-6),
            _ => unreachable!(),
        }
        assert!(best > 1.0 - 1e-8);
    }

    #[test]
    fn max_fidelity_recovers_local_thermal_input() {
        let s = thermal(0.8, 2.6);
        let (target, best) = max_fidelity_thermal(&s, TargetKind::Local).unwrap();
        match target {
            ThermalTarget::Local { mu1, mu2 } => {
                assert_abs_diff_eq!(mu1, 0.8, epsilon = 1e-6);
                assert_abs_diff_eq!(mu2, 2.6, epsilon = 1e-6);
            }
            _ => unreachable!(),
        }
        assert!(best > 1.0 - 1e-8);
    }

    #[test]
    fn max_fidelity_matches_grid_search_oracle() {
        // Correlated, not exactly thermal: compare against a brute-force
        // 1e-3-resolution grid.
        let s = SymplecticMatrix::mixing(-0.5)
            .unwrap()
            .apply(&GaussianState::thermal(1.0, 2.0).unwrap())
            .cov;
        let (_, best) = max_fidelity_thermal(&s, TargetKind::Global).unwrap();
        let (n1, n2) = s.local_occupations();
        let hi = 4.0 * (n1 + n2 + 1.0);
        let mut grid_best: f64 = 0.0;
        let mut mu = 0.0;
        while mu <= hi {
            let f = gaussian_fidelity(&s, &thermal(mu, mu)).unwrap();
            grid_best = grid_best.max(f);
            mu += 1e-3;
        }
        assert!(best >= grid_best - 1e-6, "golden {best} vs grid {grid_best}");
    }

    #[test]
    fn discord_vanishes_for_product_states() {
        for (n1, n2) in [(0.0, 0.0), (1.0, 2.0), (3.3, 0.4)] {
            let d = gaussian_discord(&thermal(n1, n2)).unwrap();
            assert!(d.value < 1e-10, "discord {} for product ({n1},{n2})", d.value);
        }
    }

    #[test]
    fn discord_invariants_are_consistent() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 1.0, 5.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let d = gaussian_discord(&ss).unwrap();
        // d± are the symplectic eigenvalues of the state itself.
        let (nu1, nu2) = ss.symplectic_eigenvalues();
        assert_abs_diff_eq!(d.d_plus, nu1, epsilon = 1e-12);
        assert_abs_diff_eq!(d.d_minus, nu2, epsilon = 1e-12);
        // Measured well leads: i1 is well 2's block determinant.
        let m = ss.matrix();
        let det2 = m.fixed_view::<2, 2>(2, 2).determinant();
        assert_abs_diff_eq!(d.i1, det2, epsilon = 1e-12);
        assert_abs_diff_eq!(d.i4, m.determinant(), epsilon = 1e-10);
    }

    #[test]
    fn steady_state_discord_positive_for_unequal_reservoirs() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 1.0, 5.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let d = gaussian_discord(&ss).unwrap();
        assert!(d.value > 1e-6, "expected clearly positive discord, got {}", d.value);
    }

    #[test]
    fn steady_state_discord_null_for_equal_reservoirs() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 2.0, 2.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let d = gaussian_discord(&ss).unwrap();
        assert!(d.value < 1e-12);
    }

    #[test]
    fn discord_is_invariant_under_local_symplectics() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 1.0, 5.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let base = gaussian_discord(&ss).unwrap().value;
        for &(a, r, b) in &[(0.3_f64, 0.2_f64, -0.8_f64), (1.1, -0.35, 0.4), (-0.6, 0.5, 0.9)] {
            let squeeze = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
            let local1 = rotation_matrix(1.0, a) * squeeze * rotation_matrix(1.0, b);
            let local2 = rotation_matrix(1.0, b) * squeeze * rotation_matrix(1.0, a);
            let s = SymplecticMatrix::from_blocks(&local1, &local2).unwrap();
            let moved = s
                .apply(&GaussianState { displacement: Vector4::zeros(), cov: ss })
                .cov;
            let d = gaussian_discord(&moved).unwrap().value;
            assert_abs_diff_eq!(d, base, epsilon = 1e-9);
        }
    }

    #[test]
    fn discord_is_continuous_in_the_state() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 1.0, 5.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let base = gaussian_discord(&ss).unwrap().value;
        let mut m = *ss.matrix();
        m[(0, 2)] += 1e-8;
        m[(2, 0)] += 1e-8;
        let perturbed = CovarianceMatrix::new(m).unwrap();
        let d = gaussian_discord(&perturbed).unwrap().value;
        assert!((d - base).abs() < 1e-5);
    }

    #[test]
    fn discord_along_closed_trajectory_is_periodic_and_revives() {
        use crate::closed::{closed_covariance, normal_modes};
        let p = ModelParams::new(0.0, 2.0, 0.0, 0.0, 0.0, 1.0, 5.0).unwrap();
        let period = 2.0 * std::f64::consts::PI / normal_modes(&p).splitting;
        for k in 1..=3 {
            let sigma = closed_covariance(&p, k as f64 * period).unwrap();
            let d = gaussian_discord(&sigma).unwrap();
            assert!(d.value < 1e-9, "discord {} at full period {k}", d.value);
        }
        let a = gaussian_discord(&closed_covariance(&p, 0.37).unwrap()).unwrap().value;
        let b = gaussian_discord(&closed_covariance(&p, 0.37 + period).unwrap()).unwrap().value;
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        assert!(a > 0.0);
    }

    #[test]
    fn discord_direction_both_defined() {
        let p = ModelParams::symmetric(5.0, 2.0, 1.0, 1.0, 5.0).unwrap();
        let ss = steady_state(&p).unwrap();
        let d2 = gaussian_discord_measuring(&ss, MeasuredWell::Two).unwrap();
        let d1 = gaussian_discord_measuring(&ss, MeasuredWell::One).unwrap();
        assert!(d1.value > 0.0 && d2.value > 0.0);
        // i1 always reports the measured block.
        assert_abs_diff_eq!(
            d1.i2, d2.i1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn negativity_zero_for_thermal_products_and_trajectories() {
        assert_eq!(log_negativity(&thermal(1.0, 2.0)).unwrap(), 0.0);
        let p = ModelParams::symmetric(0.5, 2.0, 1.0, 0.5, 3.0).unwrap();
        let traj = evolve(&p, 6.0, 0.3).unwrap();
        for state in &traj.states {
            assert_eq!(log_negativity(&state.cov).unwrap(), 0.0);
        }
    }

    #[test]
    fn negativity_of_two_mode_squeezed_state() {
        // σ = [[cosh2r 𝟙, sinh2r Z], [sinh2r Z, cosh2r 𝟙]] has ν̃₋ = e^{−2r},
        // so E_N = 2r.
        let r: f64 = 0.5;
        let ch = (2.0 * r).cosh();
        let sh = (2.0 * r).sinh();
        let m = Matrix4::new(
            ch, 0.0, sh, 0.0, //
            0.0, ch, 0.0, -sh, //
            sh, 0.0, ch, 0.0, //
            0.0, -sh, 0.0, ch,
        );
        let sigma = CovarianceMatrix::new(m).unwrap();
        assert_abs_diff_eq!(log_negativity(&sigma).unwrap(), 1.0, epsilon = 1e-12);
        // And such a state carries strictly positive discord as well.
        assert!(gaussian_discord(&sigma).unwrap().value > 0.1);
    }

    #[test]
    fn diagnostics_reject_unphysical_input() {
        let bad = Matrix4::identity() * 0.5;
        assert!(CovarianceMatrix::new(bad).is_err());
    }
}
