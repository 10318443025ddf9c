//! Two-mode Gaussian states and symplectic phase-space algebra.
//!
//! Quadratures are ordered (x₁, p₁, x₂, p₂) with x = (a + a†)/√2 and
//! p = i(a† − a)/√2, so the vacuum covariance matrix is the identity and a
//! thermal mode carries 2n̄ + 1 on the diagonal. Covariance entries are the
//! symmetrized second moments
//!
//!   σ_ij = ⟨{P̂_i, P̂_j}⟩ − 2⟨P̂_i⟩⟨P̂_j⟩.
//!
//! The canonical commutation relations are encoded by the symplectic form
//! Ω = ⊕_j [[0, 1], [−1, 0]]; a physical covariance matrix satisfies
//! σ + iΩ ⪰ 0, equivalently both symplectic eigenvalues are ≥ 1.

use nalgebra::{Matrix2, Matrix4, Vector4};

use crate::error::{Error, Result};

/// Tolerance on |σ − σᵀ| for a matrix to count as symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Max allowed deviation of SᵀΩS from Ω.
pub const SYMPLECTIC_TOL: f64 = 1e-10;
/// Symplectic eigenvalues may sit this far below 1 on clean numerical paths.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Below 1 − this bound a covariance matrix is rejected outright.
pub const PHYSICAL_HARD_TOL: f64 = 1e-6;

/// The two-mode symplectic form Ω in the (x₁, p₁, x₂, p₂) basis.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

fn max_abs(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Symmetrized quadrature covariance matrix of a two-mode Gaussian state.
///
/// Construction checks symmetry to [`SYMMETRY_TOL`] and rejects matrices
/// whose smaller symplectic eigenvalue falls below 1 − [`PHYSICAL_HARD_TOL`].
/// Small violations of ν ≥ 1 (up to the hard bound) are tolerated because
/// fixed-step integration and Fock-space truncation push ν slightly below 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(Matrix4<f64>);

impl CovarianceMatrix {
    /// Build from a raw matrix, enforcing symmetry and rough physicality.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let asym = max_abs(&(m - m.transpose()));
        if !m.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("covariance matrix has non-finite entries".into()));
        }
        if asym > SYMMETRY_TOL {
            return Err(Error::Domain(format!(
                "covariance matrix is not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let cov = Self(m);
        let (_, nu_min) = cov.symplectic_eigenvalues();
        if nu_min < 1.0 - PHYSICAL_HARD_TOL {
            return Err(Error::Unphysical { nu_min });
        }
        Ok(cov)
    }

    /// Covariance matrix of a product of thermal states with occupations
    /// n̄₁, n̄₂: diag(2n̄₁+1, 2n̄₁+1, 2n̄₂+1, 2n̄₂+1).
    pub fn thermal(nbar1: f64, nbar2: f64) -> Result<Self> {
        for (name, v) in [("nbar1", nbar1), ("nbar2", nbar2)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be ≥ 0 and finite, got {v}")));
            }
        }
        let a = 2.0 * nbar1 + 1.0;
        let b = 2.0 * nbar2 + 1.0;
        Ok(Self(Matrix4::from_diagonal(&Vector4::new(a, a, b, b))))
    }

    /// Vacuum covariance matrix (identity in this convention).
    pub fn vacuum() -> Self {
        Self(Matrix4::identity())
    }

    /// Wrap a matrix that is symmetric by construction (integrator output,
    /// closed-form solutions). Symmetrizes to absorb rounding but skips the
    /// physicality check.
    pub(crate) fn from_matrix_unchecked(m: Matrix4<f64>) -> Self {
        Self((m + m.transpose()) * 0.5)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Symplectic eigenvalues (ν₁, ν₂) in descending order: the moduli of the
    /// eigenvalues of iΩσ, computed via the two-mode symplectic invariants
    /// Δ = det A + det B + 2 det C and det σ, which give
    /// ν±² = (Δ ± √(Δ² − 4 det σ))/2.
    pub fn symplectic_eigenvalues(&self) -> (f64, f64) {
        symplectic_eigenvalues_of(&self.0)
    }

    /// Smallest symplectic eigenvalue shifted down by tolerance `tol` must
    /// still reach 1 for the state to count as physical.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.symplectic_eigenvalues().1 >= 1.0 - tol
    }

    /// Error unless the state is physical within [`PHYSICAL_TOL`]
    /// (hard-rejecting anything already caught at construction).
    pub fn require_physical(&self) -> Result<()> {
        let (_, nu_min) = self.symplectic_eigenvalues();
        if nu_min < 1.0 - PHYSICAL_HARD_TOL {
            return Err(Error::Unphysical { nu_min });
        }
        Ok(())
    }

    /// Local occupations implied by the block diagonals:
    /// n̄_j^eff = (σ_xx,j + σ_pp,j)/4 − 1/2.
    pub fn local_occupations(&self) -> (f64, f64) {
        let m = &self.0;
        (
            (m[(0, 0)] + m[(1, 1)]) / 4.0 - 0.5,
            (m[(2, 2)] + m[(3, 3)]) / 4.0 - 0.5,
        )
    }
}

/// Symplectic eigenvalues of a symmetric 4×4 matrix in descending order.
///
/// Returns a domain error if the matrix is not symmetric within
/// [`SYMMETRY_TOL`]. Unlike [`CovarianceMatrix::symplectic_eigenvalues`] this
/// does not assume physicality, so it also serves the partially transposed
/// matrices used by the entanglement check.
pub fn symplectic_eigenvalues_checked(m: &Matrix4<f64>) -> Result<(f64, f64)> {
    let asym = max_abs(&(m - m.transpose()));
    if asym > SYMMETRY_TOL {
        return Err(Error::Domain(format!(
            "symplectic eigenvalues need a symmetric matrix (max asymmetry {asym:.3e})"
        )));
    }
    Ok(symplectic_eigenvalues_of(m))
}

fn symplectic_eigenvalues_of(m: &Matrix4<f64>) -> (f64, f64) {
    let a = m.fixed_view::<2, 2>(0, 0).into_owned();
    let b = m.fixed_view::<2, 2>(2, 2).into_owned();
    let c = m.fixed_view::<2, 2>(0, 2).into_owned();
    let delta = a.determinant() + b.determinant() + 2.0 * c.determinant();
    let det = m.determinant();
    // A discriminant below the determinant noise floor means the spectrum is
    // degenerate to working precision; taking the square root of the noise
    // would otherwise smear ν by ~1e-8 on pure states.
    let mut disc = delta * delta - 4.0 * det;
    if disc < 4e-13 * delta * delta {
        disc = 0.0;
    }
    let root = disc.sqrt();
    let nu1 = (0.5 * (delta + root)).max(0.0).sqrt();
    let nu2 = (0.5 * (delta - root)).max(0.0).sqrt();
    (nu1, nu2)
}

/// A Gaussian state: first moments ⟨P̂⟩ and covariance matrix.
///
/// All scenarios covered here start from zero displacement and keep it, but
/// nonzero displacements transform correctly under symplectic maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub displacement: Vector4<f64>,
    pub cov: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(displacement: Vector4<f64>, cov: CovarianceMatrix) -> Result<Self> {
        if !displacement.iter().all(|v| v.is_finite()) {
            return Err(Error::Domain("displacement has non-finite entries".into()));
        }
        Ok(Self { displacement, cov })
    }

    /// Thermal product state with zero displacement.
    pub fn thermal(nbar1: f64, nbar2: f64) -> Result<Self> {
        Ok(Self { displacement: Vector4::zeros(), cov: CovarianceMatrix::thermal(nbar1, nbar2)? })
    }
}

/// A 4×4 real symplectic matrix: SᵀΩS = Ω within [`SYMPLECTIC_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMatrix(Matrix4<f64>);

impl SymplecticMatrix {
    /// Build from a raw matrix, verifying the symplectic condition.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let omega = symplectic_form();
        let deviation = max_abs(&(m.transpose() * omega * m - omega));
        if !deviation.is_finite() || deviation > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { deviation });
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    /// Two-mode mixing transformation
    /// T(θ) = [[cos θ · 𝟙₂, sin θ · 𝟙₂], [−sin θ · 𝟙₂, cos θ · 𝟙₂]],
    /// the phase-space image of exp[−i θ/2 (a₁†a₂ + a₁a₂†)].
    pub fn mixing(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Domain(format!("mixing angle must be finite, got {theta}")));
        }
        let (s, c) = theta.sin_cos();
        Self::new(Matrix4::new(
            c, 0.0, s, 0.0, //
            0.0, c, 0.0, s, //
            -s, 0.0, c, 0.0, //
            0.0, -s, 0.0, c,
        ))
    }

    /// Block-diagonal composition of two single-mode 2×2 blocks.
    pub fn from_blocks(m1: &Matrix2<f64>, m2: &Matrix2<f64>) -> Result<Self> {
        let mut m = Matrix4::zeros();
        m.fixed_view_mut::<2, 2>(0, 0).copy_from(m1);
        m.fixed_view_mut::<2, 2>(2, 2).copy_from(m2);
        Self::new(m)
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// Push a Gaussian state through the transformation:
    /// σ → SσSᵀ, ⟨P̂⟩ → S⟨P̂⟩.
    pub fn apply(&self, state: &GaussianState) -> GaussianState {
        let m = self.0 * state.cov.matrix() * self.0.transpose();
        // Symmetry survives S·σ·Sᵀ exactly up to rounding; resymmetrize so the
        // constructor tolerance never trips on accumulated products.
        let sym = (m + m.transpose()) * 0.5;
        GaussianState {
            displacement: self.0 * state.displacement,
            cov: CovarianceMatrix(sym),
        }
    }

    /// Composition `self` ∘ `other` (apply `other` first).
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<Self> {
        Self::new(self.0 * other.0)
    }
}

/// Phase-space rotation of a single mode evolving freely at frequency Ω for
/// time t: [[cos Ωt, sin Ωt], [−sin Ωt, cos Ωt]].
pub fn rotation_matrix(omega: f64, t: f64) -> Matrix2<f64> {
    let (s, c) = (omega * t).sin_cos();
    Matrix2::new(c, s, -s, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_diff(a: &Matrix4<f64>, b: &Matrix4<f64>) -> f64 {
        max_abs(&(a - b))
    }

    #[test]
    fn thermal_covariance_diagonals() {
        let c = CovarianceMatrix::thermal(1.0, 2.0).unwrap();
        let expect = Matrix4::from_diagonal(&Vector4::new(3.0, 3.0, 5.0, 5.0));
        assert_eq!(c.matrix(), &expect);

        assert_eq!(CovarianceMatrix::thermal(0.0, 0.0).unwrap().matrix(), &Matrix4::identity());
        assert_eq!(
            CovarianceMatrix::thermal(5.0, 5.0).unwrap().matrix(),
            &(Matrix4::identity() * 11.0)
        );
    }

    #[test]
    fn thermal_covariance_rejects_negative_occupation() {
        assert!(CovarianceMatrix::thermal(-0.5, 1.0).is_err());
        assert!(CovarianceMatrix::thermal(1.0, f64::NAN).is_err());
    }

    #[test]
    fn mixing_matrix_special_angles() {
        let t0 = SymplecticMatrix::mixing(0.0).unwrap();
        assert_eq!(t0.matrix(), &Matrix4::identity());

        // θ = π/2 swaps the modes with a sign.
        let t = SymplecticMatrix::mixing(std::f64::consts::FRAC_PI_2).unwrap();
        let expect = Matrix4::new(
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            -1.0, 0.0, 0.0, 0.0, //
            0.0, -1.0, 0.0, 0.0,
        );
        assert!(max_diff(t.matrix(), &expect) < 1e-15);
    }

    #[test]
    fn mixing_matrix_inverse_is_opposite_angle() {
        for &theta in &[0.3, -0.7, 1.2, std::f64::consts::FRAC_PI_4] {
            let t = SymplecticMatrix::mixing(theta).unwrap();
            let tinv = SymplecticMatrix::mixing(-theta).unwrap();
            let prod = t.matrix() * tinv.matrix();
            assert!(max_diff(&prod, &Matrix4::identity()) < 1e-14);
        }
    }

    #[test]
    fn rotation_block_cases() {
        assert_eq!(rotation_matrix(2.5, 0.0), Matrix2::identity());
        let r = rotation_matrix(1.0, std::f64::consts::FRAC_PI_2);
        assert_abs_diff_eq!(r, Matrix2::new(0.0, 1.0, -1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn rotation_composes_additively() {
        let omega = 1.7;
        let lhs = rotation_matrix(omega, 0.4) * rotation_matrix(omega, 0.9);
        let rhs = rotation_matrix(omega, 1.3);
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-14);
    }

    #[test]
    fn apply_identity_is_noop() {
        let state = GaussianState::thermal(1.0, 2.0).unwrap();
        let out = SymplecticMatrix::identity().apply(&state);
        assert_eq!(out, state);
    }

    #[test]
    fn mixing_leaves_equal_temperature_thermal_invariant() {
        let state = GaussianState::thermal(1.5, 1.5).unwrap();
        for k in 0..16 {
            let theta = -1.5 + 0.2 * k as f64;
            let t = SymplecticMatrix::mixing(theta).unwrap();
            let out = t.apply(&state);
            assert!(max_diff(out.cov.matrix(), state.cov.matrix()) < 1e-13);
        }
    }

    #[test]
    fn mixing_quarter_turn_on_unequal_thermal() {
        // T(−π/4) · diag(3,3,5,5) · T(−π/4)ᵀ has isotropic diagonal blocks at 4
        // and −1 on the block diagonal of the cross block (the direct product
        // gives cos θ sin θ (b − a) = −1 there).
        let state = GaussianState::thermal(1.0, 2.0).unwrap();
        let t = SymplecticMatrix::mixing(-std::f64::consts::FRAC_PI_4).unwrap();
        let out = t.apply(&state);
        let expect = Matrix4::new(
            4.0, 0.0, -1.0, 0.0, //
            0.0, 4.0, 0.0, -1.0, //
            -1.0, 0.0, 4.0, 0.0, //
            0.0, -1.0, 0.0, 4.0,
        );
        assert!(max_diff(out.cov.matrix(), &expect) < 1e-14);
    }

    #[test]
    fn apply_preserves_physicality() {
        let state = GaussianState::thermal(0.0, 3.0).unwrap();
        let s = SymplecticMatrix::mixing(0.9).unwrap();
        let out = s.apply(&state);
        assert!(state.cov.is_physical(PHYSICAL_TOL));
        assert!(out.cov.is_physical(PHYSICAL_TOL));
    }

    #[test]
    fn symplectic_eigenvalues_reference_cases() {
        let (n1, n2) = CovarianceMatrix::vacuum().symplectic_eigenvalues();
        assert_abs_diff_eq!(n1, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(n2, 1.0, epsilon = 1e-14);

        let (n1, n2) = CovarianceMatrix::thermal(1.0, 2.0).unwrap().symplectic_eigenvalues();
        assert_abs_diff_eq!(n1, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(n2, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn symplectic_eigenvalues_match_spectrum_of_i_omega_sigma() {
        // Independent route: |eigenvalues of iΩσ| via the complex spectrum of
        // the real matrix Ωσ.
        let t = SymplecticMatrix::mixing(-0.6).unwrap();
        let state = t.apply(&GaussianState::thermal(0.7, 2.3).unwrap());
        let m = symplectic_form() * state.cov.matrix();
        let mut mods: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.norm()).collect();
        mods.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let (nu1, nu2) = state.cov.symplectic_eigenvalues();
        assert_abs_diff_eq!(nu1, mods[0], epsilon = 1e-10);
        assert_abs_diff_eq!(nu2, mods[2], epsilon = 1e-10);
    }

    #[test]
    fn symplectic_eigenvalues_invariant_under_symplectic_conjugation() {
        let state = GaussianState::thermal(0.4, 1.9).unwrap();
        let before = state.cov.symplectic_eigenvalues();
        let s = SymplecticMatrix::mixing(1.1)
            .unwrap()
            .compose(&SymplecticMatrix::from_blocks(
                &rotation_matrix(1.0, 0.8),
                &rotation_matrix(3.0, 0.2),
            ).unwrap())
            .unwrap();
        let after = s.apply(&state).cov.symplectic_eigenvalues();
        assert_abs_diff_eq!(before.0, after.0, epsilon = 1e-10);
        assert_abs_diff_eq!(before.1, after.1, epsilon = 1e-10);
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let mut m = Matrix4::identity();
        m[(0, 1)] = 1e-6;
        assert!(CovarianceMatrix::new(m).is_err());
        assert!(symplectic_eigenvalues_checked(&m).is_err());
    }

    #[test]
    fn unphysical_matrix_rejected() {
        assert!(CovarianceMatrix::new(Matrix4::identity() * 0.5).is_err());
    }

    #[test]
    fn non_symplectic_matrix_rejected() {
        let err = SymplecticMatrix::new(Matrix4::identity() * 2.0);
        assert!(matches!(err, Err(Error::NotSymplectic { .. })));
    }
}
