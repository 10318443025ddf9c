//! Truncated Fock-space Lindblad engine.
//!
//! The two-mode density matrix is kept in the product number basis
//! |n₁⟩⊗|n₂⟩ with n_j < N_c and well 1 as the slow index
//! (row r = n₁·N_c + n₂). This engine integrates the full master equation
//!
//!   ϱ̇ = −i[ℋ, ϱ] + Σ_j γ_j(n̄_j+1) D[a_j](ϱ) + γ_j n̄_j D[a_j†](ϱ),
//!
//! with ℋ = Σ_j ω_j(n̂_j+½) + (U/2)Σ_j n̂_j(n̂_j−1) − J(a₁†a₂ + a₁a₂†), and
//! serves two roles: the ground truth for the interacting regime U ≠ 0, and
//! a brute-force oracle for everything the Gaussian engine computes in
//! closed form.
//!
//! Truncation safety: a run is flagged unsafe when the population of the
//! last retained level of either mode exceeds 10⁻⁶ anywhere along the
//! trajectory. Thermal tails are geometric, so N_c ≈ 25 covers n̄ ≲ 1.5 at
//! that level and N_c ≈ 35 covers n̄ ≲ 2.

mod liouvillian;

pub use liouvillian::{evolve_fock, evolve_fock_from, expm, FockTrajectory, Liouvillian};

use nalgebra::{DMatrix, Matrix4, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, GaussianState};
use crate::open::Trajectory as GaussianTrajectory;
use crate::params::ModelParams;
use crate::thermo::FluxRecord;

/// Tail mass in the last retained level beyond which a run is flagged
/// truncation-unsafe.
pub const TAIL_MASS_BOUND: f64 = 1e-6;

/// Largest entry modulus of a complex matrix.
pub(crate) fn max_modulus(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// A two-mode density matrix truncated at per-mode dimension `cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockDensityMatrix {
    cutoff: usize,
    rho: DMatrix<Complex64>,
}

impl FockDensityMatrix {
    /// Wrap and validate: Hermitian within 1e-10, unit trace within 1e-9,
    /// smallest eigenvalue ≥ −1e-8.
    pub fn new(cutoff: usize, rho: DMatrix<Complex64>) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Domain(format!("cutoff must be ≥ 2, got {cutoff}")));
        }
        let dim = cutoff * cutoff;
        if rho.nrows() != dim || rho.ncols() != dim {
            return Err(Error::Domain(format!(
                "density matrix must be {dim}×{dim} for cutoff {cutoff}, got {}×{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let state = Self { cutoff, rho };
        let herm = state.hermiticity_error();
        if !(herm <= 1e-10) {
            return Err(Error::Domain(format!("density matrix not Hermitian (deviation {herm:.3e})")));
        }
        let tr = state.trace();
        if !((tr - 1.0).abs() <= 1e-9) {
            return Err(Error::Domain(format!("density matrix trace {tr} is not 1 within 1e-9")));
        }
        let min_eig = state.min_eigenvalue();
        if !(min_eig >= -1e-8) {
            return Err(Error::Domain(format!(
                "density matrix not positive (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(state)
    }

    /// Product of truncated thermal states with geometric populations
    /// p(n) ∝ (n̄/(n̄+1))ⁿ, renormalized over the retained levels. This is
    /// exactly the stationary state of the truncated local dissipators.
    pub fn thermal_product(cutoff: usize, nbar1: f64, nbar2: f64) -> Result<Self> {
        let p1 = geometric_populations(cutoff, nbar1)?;
        let p2 = geometric_populations(cutoff, nbar2)?;
        Self::from_mode_populations(cutoff, &p1, &p2)
    }

    /// Diagonal product state from per-mode populations (normalized here).
    pub fn from_mode_populations(cutoff: usize, pops1: &[f64], pops2: &[f64]) -> Result<Self> {
        if pops1.len() != cutoff || pops2.len() != cutoff {
            return Err(Error::Domain("population vectors must have length = cutoff".into()));
        }
        for &p in pops1.iter().chain(pops2) {
            if !(p >= 0.0) || !p.is_finite() {
                return Err(Error::Domain(format!("populations must be ≥ 0 and finite, got {p}")));
            }
        }
        let (z1, z2) = (pops1.iter().sum::<f64>(), pops2.iter().sum::<f64>());
        if z1 <= 0.0 || z2 <= 0.0 {
            return Err(Error::Domain("populations must not all vanish".into()));
        }
        let dim = cutoff * cutoff;
        let mut rho = DMatrix::zeros(dim, dim);
        for n1 in 0..cutoff {
            for n2 in 0..cutoff {
                let k = n1 * cutoff + n2;
                rho[(k, k)] = Complex64::new(pops1[n1] / z1 * pops2[n2] / z2, 0.0);
            }
        }
        Self::new(cutoff, rho)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        (0..self.rho.nrows()).map(|k| self.rho[(k, k)].re).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut max = 0.0_f64;
        for r in 0..self.rho.nrows() {
            for c in r..self.rho.ncols() {
                max = max.max((self.rho[(r, c)] - self.rho[(c, r)].conj()).norm());
            }
        }
        max
    }

    /// Smallest eigenvalue. States supported on the equal-total-number
    /// sectors are block-diagonal when reordered by total excitation number,
    /// so their spectrum is computed blockwise; anything else goes through a
    /// full Hermitian eigendecomposition.
    pub fn min_eigenvalue(&self) -> f64 {
        match self.sector_blocks() {
            Some(blocks) => blocks
                .iter()
                .flat_map(|b| b.clone().symmetric_eigen().eigenvalues.iter().copied().collect::<Vec<f64>>())
                .fold(f64::INFINITY, f64::min),
            None => self
                .rho
                .clone()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .fold(f64::INFINITY, |acc, &v| acc.min(v)),
        }
    }

    /// Population in the last retained level of either mode:
    /// P(n₁ = N_c−1) + P(n₂ = N_c−1) − P(both).
    pub fn tail_mass(&self) -> f64 {
        let n = self.cutoff;
        let last = n - 1;
        let mut p1 = 0.0;
        let mut p2 = 0.0;
        for k in 0..n {
            p1 += self.rho[(last * n + k, last * n + k)].re;
            p2 += self.rho[(k * n + last, k * n + last)].re;
        }
        let corner = self.rho[(last * n + last, last * n + last)].re;
        p1 + p2 - corner
    }

    /// Mean occupation of each well.
    pub fn mode_occupations(&self) -> (f64, f64) {
        let n = self.cutoff;
        let mut o1 = 0.0;
        let mut o2 = 0.0;
        for n1 in 0..n {
            for n2 in 0..n {
                let p = self.rho[(n1 * n + n2, n1 * n + n2)].re;
                o1 += n1 as f64 * p;
                o2 += n2 as f64 * p;
            }
        }
        (o1, o2)
    }

    /// Reduced state of well 1 (tracing out well 2).
    pub fn reduced_state_well1(&self) -> DMatrix<Complex64> {
        let n = self.cutoff;
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = Complex64::default();
                for k in 0..n {
                    acc += self.rho[(a * n + k, b * n + k)];
                }
                out[(a, b)] = acc;
            }
        }
        out
    }

    /// Reduced state of well 2 (tracing out well 1, the slow index).
    pub fn reduced_state_well2(&self) -> DMatrix<Complex64> {
        let n = self.cutoff;
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut acc = Complex64::default();
                for k in 0..n {
                    acc += self.rho[(k * n + a, k * n + b)];
                }
                out[(a, b)] = acc;
            }
        }
        out
    }

    /// Split into the equal-total-number blocks if (and only if) every entry
    /// outside them is negligible. Block s collects the basis states with
    /// n₁ + n₂ = s, ordered by n₁.
    fn sector_blocks(&self) -> Option<Vec<DMatrix<Complex64>>> {
        let n = self.cutoff;
        let mut off_mass = 0.0_f64;
        for n1 in 0..n {
            for n2 in 0..n {
                for m1 in 0..n {
                    for m2 in 0..n {
                        if n1 + n2 != m1 + m2 {
                            off_mass = off_mass.max(self.rho[(n1 * n + n2, m1 * n + m2)].norm());
                        }
                    }
                }
            }
        }
        if off_mass > 1e-12 {
            return None;
        }
        let mut blocks = Vec::with_capacity(2 * n - 1);
        for s in 0..=(2 * n - 2) {
            let lo = s.saturating_sub(n - 1);
            let hi = s.min(n - 1);
            let m = hi - lo + 1;
            let mut block = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    let r = (lo + i) * n + (s - lo - i);
                    let c = (lo + j) * n + (s - lo - j);
                    block[(i, j)] = self.rho[(r, c)];
                }
            }
            blocks.push(block);
        }
        Some(blocks)
    }
}

fn geometric_populations(cutoff: usize, nbar: f64) -> Result<Vec<f64>> {
    if !(nbar >= 0.0) || !nbar.is_finite() {
        return Err(Error::Domain(format!("occupation must be ≥ 0 and finite, got {nbar}")));
    }
    let q = nbar / (nbar + 1.0);
    let mut pops = Vec::with_capacity(cutoff);
    let mut p = 1.0;
    for _ in 0..cutoff {
        pops.push(p);
        p *= q;
    }
    Ok(pops)
}

/// First and symmetrized second quadrature moments of a Fock-space state,
/// evaluated with the truncated ladder operators:
///
/// ```text
/// σ_xx = 2⟨n̂⟩ + 1 + 2Re⟨a²⟩ − 2⟨x⟩²        σ_xp = 2Im⟨a²⟩ − 2⟨x⟩⟨p⟩
/// σ_pp = 2⟨n̂⟩ + 1 − 2Re⟨a²⟩ − 2⟨p⟩²
/// σ_x₁x₂ = 2Re⟨a₁a₂⟩ + 2Re⟨a₁a₂†⟩ − 2⟨x₁⟩⟨x₂⟩
/// σ_p₁p₂ = 2Re⟨a₁a₂†⟩ − 2Re⟨a₁a₂⟩ − 2⟨p₁⟩⟨p₂⟩
/// σ_x₁p₂ = 2Im⟨a₁a₂⟩ − 2Im⟨a₁a₂†⟩ − 2⟨x₁⟩⟨p₂⟩
/// σ_p₁x₂ = 2Im⟨a₁a₂⟩ + 2Im⟨a₁a₂†⟩ − 2⟨p₁⟩⟨x₂⟩
/// ```
///
/// For interacting (U ≠ 0) states this is the covariance matrix of the
/// hypothetical Gaussian state with the same second moments; it need not be
/// a pure-Gaussian covariance but must stay physical up to truncation noise.
pub fn extract_covariance(state: &FockDensityMatrix) -> Result<GaussianState> {
    let n = state.cutoff;
    let rho = &state.rho;
    let sq: Vec<f64> = (0..=n).map(|k| (k as f64).sqrt()).collect();

    // ⟨a_j⟩, ⟨a_j²⟩, ⟨n_j⟩, ⟨a₁a₂⟩, ⟨a₁a₂†⟩ as sums over near-diagonal entries.
    let mut a1 = Complex64::default();
    let mut a2 = Complex64::default();
    let mut a1sq = Complex64::default();
    let mut a2sq = Complex64::default();
    let mut n1_mean = 0.0;
    let mut n2_mean = 0.0;
    let mut a1a2 = Complex64::default();
    let mut a1a2dag = Complex64::default();

    for n1 in 0..n {
        for n2 in 0..n {
            let col = n1 * n + n2;
            // ⟨A⟩ = Tr[Aρ] = Σ_col ⟨col|Aρ|col⟩ = Σ A[col, row]·ρ[row, col].
            if n1 + 1 < n {
                a1 += sq[n1 + 1] * rho[((n1 + 1) * n + n2, col)];
            }
            if n2 + 1 < n {
                a2 += sq[n2 + 1] * rho[(n1 * n + n2 + 1, col)];
            }
            if n1 + 2 < n {
                a1sq += sq[n1 + 1] * sq[n1 + 2] * rho[((n1 + 2) * n + n2, col)];
            }
            if n2 + 2 < n {
                a2sq += sq[n2 + 1] * sq[n2 + 2] * rho[(n1 * n + n2 + 2, col)];
            }
            if n1 + 1 < n && n2 + 1 < n {
                a1a2 += sq[n1 + 1] * sq[n2 + 1] * rho[((n1 + 1) * n + n2 + 1, col)];
            }
            if n1 + 1 < n && n2 > 0 {
                // a₁a₂† |n₁+1, n₂−1⟩ component: ⟨n₁,n₂| a₁a₂† |k⟩ with
                // k = (n₁+1, n₂−1) has weight √(n₁+1)√(n₂).
                a1a2dag += sq[n1 + 1] * sq[n2] * rho[((n1 + 1) * n + n2 - 1, col)];
            }
            let p = rho[(col, col)].re;
            n1_mean += n1 as f64 * p;
            n2_mean += n2 as f64 * p;
        }
    }

    let x1 = std::f64::consts::SQRT_2 * a1.re;
    let p1 = std::f64::consts::SQRT_2 * a1.im;
    let x2 = std::f64::consts::SQRT_2 * a2.re;
    let p2 = std::f64::consts::SQRT_2 * a2.im;

    let s11 = 2.0 * n1_mean + 1.0 + 2.0 * a1sq.re - 2.0 * x1 * x1;
    let s22 = 2.0 * n1_mean + 1.0 - 2.0 * a1sq.re - 2.0 * p1 * p1;
    let s12 = 2.0 * a1sq.im - 2.0 * x1 * p1;
    let s33 = 2.0 * n2_mean + 1.0 + 2.0 * a2sq.re - 2.0 * x2 * x2;
    let s44 = 2.0 * n2_mean + 1.0 - 2.0 * a2sq.re - 2.0 * p2 * p2;
    let s34 = 2.0 * a2sq.im - 2.0 * x2 * p2;
    let s13 = 2.0 * (a1a2.re + a1a2dag.re) - 2.0 * x1 * x2;
    let s24 = 2.0 * (a1a2dag.re - a1a2.re) - 2.0 * p1 * p2;
    let s14 = 2.0 * (a1a2.im - a1a2dag.im) - 2.0 * x1 * p2;
    let s23 = 2.0 * (a1a2.im + a1a2dag.im) - 2.0 * p1 * x2;

    let cov = CovarianceMatrix::new(Matrix4::new(
        s11, s12, s13, s14, //
        s12, s22, s23, s24, //
        s13, s23, s33, s34, //
        s14, s24, s34, s44,
    ))?;
    GaussianState::new(Vector4::new(x1, p1, x2, p2), cov)
}

/// Uhlmann fidelity F = (Tr √(√ϱ₁ ϱ₂ √ϱ₁))² between two Fock-space states,
/// via Hermitian eigendecomposition. States supported on the
/// equal-total-number sectors factorize blockwise, which is both faster and
/// better conditioned; mixed support falls back to the dense computation.
pub fn fock_uhlmann_fidelity(rho1: &FockDensityMatrix, rho2: &FockDensityMatrix) -> Result<f64> {
    if rho1.cutoff != rho2.cutoff {
        return Err(Error::CutoffMismatch { left: rho1.cutoff, right: rho2.cutoff });
    }
    let total = match (rho1.sector_blocks(), rho2.sector_blocks()) {
        (Some(b1), Some(b2)) => b1
            .iter()
            .zip(&b2)
            .map(|(a, b)| trace_sqrt_product(a, b))
            .sum::<f64>(),
        _ => trace_sqrt_product(&rho1.rho, &rho2.rho),
    };
    Ok((total * total).clamp(0.0, 1.0 + 1e-9).min(1.0))
}

/// Tr √(√A B √A) for Hermitian positive semidefinite A, B.
fn trace_sqrt_product(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    let eig = a.clone().symmetric_eigen();
    let sqrt_vals =
        DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.max(0.0).sqrt(), 0.0)));
    let sqrt_a = &eig.eigenvectors * sqrt_vals * eig.eigenvectors.adjoint();
    let inner = &sqrt_a * b * &sqrt_a;
    inner
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .sum()
}

/// Heat fluxes along a Fock trajectory: Q̇_j = Tr[ℋ_j ∂_tϱ_j] and
/// Q̇_tot = Tr[ℋ ∂_tϱ], with ∂_tϱ evaluated through the Liouvillian at each
/// sample (never by finite differences). For U ≠ 0 the total flux is
/// generally nonzero.
pub fn fluxes_fock(
    samples: &[(f64, FockDensityMatrix)],
    params: &ModelParams,
) -> Result<Vec<FluxRecord>> {
    let Some((_, first)) = samples.first() else {
        return Ok(Vec::new());
    };
    let liouv = Liouvillian::new(params, first.cutoff())?;
    samples
        .iter()
        .map(|(t, state)| {
            if state.cutoff() != first.cutoff() {
                return Err(Error::CutoffMismatch {
                    left: first.cutoff(),
                    right: state.cutoff(),
                });
            }
            let rhodot = liouv.apply_dense(state.matrix());
            let (q1, q2, qtot) = liouv.energy_rates(&rhodot);
            let (_, _, e_tot) = liouv.energy_rates(state.matrix());
            Ok(FluxRecord { t: *t, qdot1: q1, qdot2: q2, qdot_tot: qtot, q_tot: e_tot })
        })
        .collect()
}

/// Covariance comparison helper: max-norm distance between the Fock-extracted
/// covariance and a Gaussian-engine trajectory at matching sample times.
pub fn covariance_distance(
    fock: &[(f64, FockDensityMatrix)],
    gaussian: &GaussianTrajectory,
) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (k, (t, state)) in fock.iter().enumerate() {
        let gt = gaussian
            .times
            .get(k)
            .ok_or_else(|| Error::Domain("trajectory sample counts differ".into()))?;
        if (gt - t).abs() > 1e-9 {
            return Err(Error::Domain(format!("sample times differ: {t} vs {gt}")));
        }
        let extracted = extract_covariance(state)?;
        let diff = (extracted.cov.matrix() - gaussian.states[k].cov.matrix()).amax();
        worst = worst.max(diff);
    }
    Ok(worst)
}
