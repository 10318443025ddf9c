//! The Lindblad generator on the truncated two-mode Fock space and its
//! fixed-step integrator.
//!
//! Every term of the generator either preserves the total excitation number
//! on both sides of ϱ (the Hamiltonian) or shifts ket and bra together (the
//! jump operators a_jϱa_j† and a_j†ϱa_j). A state supported on the
//! "sectors" {|n₁n₂⟩⟨m₁m₂| : n₁+n₂ = m₁+m₂} therefore stays there forever.
//! Number-diagonal initial states — every thermal or diagonal product state
//! used here — live in these sectors, which cuts the evolved amplitudes from
//! N_c⁴ to ~2N_c³/3 and is what makes long interacting runs cheap.
//!
//! The dense generator [`Liouvillian::apply_dense`] acts on arbitrary
//! matrices and is the reference implementation; the sector walk is checked
//! against it, and the small-cutoff matrix exponential
//! [`Liouvillian::propagator`] is checked against both.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{max_modulus, FockDensityMatrix};
use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Fixed RK4 step of the Fock-space integrator. The actual step divides the
/// sampling interval evenly and never exceeds this value.
pub const FOCK_STEP: f64 = 1e-3;

type C64 = Complex64;

/// The Lindblad generator at fixed parameters and cutoff.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    params: ModelParams,
    n: usize,
    /// Diagonal Hamiltonian energies E(n₁,n₂) indexed by k = n₁·N + n₂.
    energies: Vec<f64>,
    /// Local damping sums g(n₁,n₂) entering the anticommutator parts.
    damping: Vec<f64>,
    /// √k for k = 0..=N.
    sq: Vec<f64>,
    /// Sector layout: block s holds n₁ ∈ [lo(s), lo(s)+size(s)).
    lo: Vec<usize>,
    size: Vec<usize>,
    offset: Vec<usize>,
    total_len: usize,
}

impl Liouvillian {
    pub fn new(params: &ModelParams, cutoff: usize) -> Result<Self> {
        params.validate()?;
        if cutoff < 2 {
            return Err(Error::Domain(format!("cutoff must be ≥ 2, got {cutoff}")));
        }
        let n = cutoff;
        let w2 = params.omega2();
        let mut energies = Vec::with_capacity(n * n);
        let mut damping = Vec::with_capacity(n * n);
        for n1 in 0..n {
            for n2 in 0..n {
                let (f1, f2) = (n1 as f64, n2 as f64);
                energies.push(
                    (f1 + 0.5)
                        + w2 * (f2 + 0.5)
                        + 0.5 * params.u * (f1 * (f1 - 1.0) + f2 * (f2 - 1.0)),
                );
                // The anticommutator parts use the *truncated* a_j a_j†,
                // whose diagonal vanishes on the last level; anything else
                // breaks trace preservation and detailed balance at the
                // boundary.
                let up1 = if n1 + 1 < n { f1 + 1.0 } else { 0.0 };
                let up2 = if n2 + 1 < n { f2 + 1.0 } else { 0.0 };
                damping.push(
                    0.5 * (params.gamma1 * (params.nbar1 + 1.0) * f1
                        + params.gamma1 * params.nbar1 * up1
                        + params.gamma2 * (params.nbar2 + 1.0) * f2
                        + params.gamma2 * params.nbar2 * up2),
                );
            }
        }
        let sq: Vec<f64> = (0..=n).map(|k| (k as f64).sqrt()).collect();
        let sectors = 2 * n - 1;
        let mut lo = Vec::with_capacity(sectors);
        let mut size = Vec::with_capacity(sectors);
        let mut offset = Vec::with_capacity(sectors);
        let mut acc = 0usize;
        for s in 0..sectors {
            let l = s.saturating_sub(n - 1);
            let h = s.min(n - 1);
            lo.push(l);
            size.push(h - l + 1);
            offset.push(acc);
            acc += (h - l + 1) * (h - l + 1);
        }
        Ok(Self { params: *params, n, energies, damping, sq, lo, size, offset, total_len: acc })
    }

    pub fn cutoff(&self) -> usize {
        self.n
    }

    /// ϱ̇ = ℒ(ϱ) on an arbitrary (not necessarily Hermitian) matrix.
    /// Reference implementation; trace-free for any input.
    pub fn apply_dense(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let n = self.n;
        let dim = n * n;
        assert_eq!(rho.nrows(), dim, "density matrix does not match cutoff");
        let mut out = DMatrix::<C64>::zeros(dim, dim);
        let j = self.params.j;
        let g1up = self.params.gamma1 * (self.params.nbar1 + 1.0);
        let g1dn = self.params.gamma1 * self.params.nbar1;
        let g2up = self.params.gamma2 * (self.params.nbar2 + 1.0);
        let g2dn = self.params.gamma2 * self.params.nbar2;

        for n1 in 0..n {
            for n2 in 0..n {
                let r = n1 * n + n2;
                for m1 in 0..n {
                    for m2 in 0..n {
                        let c = m1 * n + m2;
                        let mut acc = C64::new(
                            -(self.damping[r] + self.damping[c]),
                            -(self.energies[r] - self.energies[c]),
                        ) * rho[(r, c)];

                        // −i[H_t, ϱ] with H_t = −J(a₁†a₂ + a₁a₂†):
                        let mut hop = C64::default();
                        if n1 > 0 && n2 + 1 < n {
                            hop += self.sq[n1] * self.sq[n2 + 1] * rho[((n1 - 1) * n + n2 + 1, c)];
                        }
                        if n1 + 1 < n && n2 > 0 {
                            hop += self.sq[n1 + 1] * self.sq[n2] * rho[((n1 + 1) * n + n2 - 1, c)];
                        }
                        if m1 > 0 && m2 + 1 < n {
                            hop -= self.sq[m1] * self.sq[m2 + 1] * rho[(r, (m1 - 1) * n + m2 + 1)];
                        }
                        if m1 + 1 < n && m2 > 0 {
                            hop -= self.sq[m1 + 1] * self.sq[m2] * rho[(r, (m1 + 1) * n + m2 - 1)];
                        }
                        acc += C64::new(0.0, j) * hop;

                        // Jump terms a ϱ a† and a† ϱ a for each mode.
                        if n1 + 1 < n && m1 + 1 < n {
                            acc += g1up
                                * self.sq[n1 + 1]
                                * self.sq[m1 + 1]
                                * rho[((n1 + 1) * n + n2, (m1 + 1) * n + m2)];
                        }
                        if n1 > 0 && m1 > 0 {
                            acc += g1dn
                                * self.sq[n1]
                                * self.sq[m1]
                                * rho[((n1 - 1) * n + n2, (m1 - 1) * n + m2)];
                        }
                        if n2 + 1 < n && m2 + 1 < n {
                            acc += g2up
                                * self.sq[n2 + 1]
                                * self.sq[m2 + 1]
                                * rho[(n1 * n + n2 + 1, m1 * n + m2 + 1)];
                        }
                        if n2 > 0 && m2 > 0 {
                            acc += g2dn
                                * self.sq[n2]
                                * self.sq[m2]
                                * rho[(n1 * n + n2 - 1, m1 * n + m2 - 1)];
                        }
                        out[(r, c)] = acc;
                    }
                }
            }
        }
        out
    }

    /// (Tr[ℋ₁M], Tr[ℋ₂M], Tr[ℋM]) for a matrix in the product basis;
    /// applied to ϱ̇ this yields the heat fluxes, applied to ϱ the energies.
    pub fn energy_rates(&self, m: &DMatrix<C64>) -> (f64, f64, f64) {
        let n = self.n;
        let w2 = self.params.omega2();
        let mut h1 = 0.0;
        let mut h2 = 0.0;
        let mut htot = 0.0;
        for n1 in 0..n {
            for n2 in 0..n {
                let r = n1 * n + n2;
                let p = m[(r, r)].re;
                h1 += (n1 as f64 + 0.5) * p;
                h2 += w2 * (n2 as f64 + 0.5) * p;
                htot += self.energies[r] * p;
                // Tunnelling part of Tr[ℋM]: H_t couples (n₁,n₂) to
                // (n₁∓1, n₂±1).
                if n1 > 0 && n2 + 1 < n {
                    htot -= self.params.j
                        * self.sq[n1]
                        * self.sq[n2 + 1]
                        * ((m[((n1 - 1) * n + n2 + 1, r)]).re);
                }
                if n1 + 1 < n && n2 > 0 {
                    htot -= self.params.j
                        * self.sq[n1 + 1]
                        * self.sq[n2]
                        * ((m[((n1 + 1) * n + n2 - 1, r)]).re);
                }
            }
        }
        (h1, h2, htot)
    }

    /// The generator as a dense superoperator on vec(ϱ) (column-major).
    /// Dimension (N_c²)², so this is restricted to N_c ≤ 12 and is only
    /// comfortable below N_c ≈ 8.
    pub fn superoperator_matrix(&self) -> Result<DMatrix<C64>> {
        if self.n > 12 {
            return Err(Error::Domain(format!(
                "dense superoperator limited to cutoff ≤ 12, got {}",
                self.n
            )));
        }
        let dim = self.n * self.n;
        let sup_dim = dim * dim;
        let mut k = DMatrix::<C64>::zeros(sup_dim, sup_dim);
        let mut basis = DMatrix::<C64>::zeros(dim, dim);
        for col in 0..sup_dim {
            let (r, c) = (col % dim, col / dim);
            basis[(r, c)] = C64::new(1.0, 0.0);
            let image = self.apply_dense(&basis);
            basis[(r, c)] = C64::default();
            for cc in 0..dim {
                for rr in 0..dim {
                    let v = image[(rr, cc)];
                    if v != C64::default() {
                        k[(rr + cc * dim, col)] = v;
                    }
                }
            }
        }
        Ok(k)
    }

    /// Dense propagator exp(ℒt) for small cutoffs, via the superoperator
    /// matrix exponential.
    pub fn propagator(&self, t: f64) -> Result<DMatrix<C64>> {
        let k = self.superoperator_matrix()?;
        Ok(expm(&(k * C64::new(t, 0.0))))
    }

    /// Propagate a state with the dense propagator (N_c ≤ 12).
    pub fn propagate_dense(&self, state: &FockDensityMatrix, t: f64) -> Result<FockDensityMatrix> {
        if state.cutoff() != self.n {
            return Err(Error::CutoffMismatch { left: self.n, right: state.cutoff() });
        }
        let dim = self.n * self.n;
        let prop = self.propagator(t)?;
        let v = DVector::from_column_slice(state.matrix().as_slice());
        let out = prop * v;
        let rho = DMatrix::from_column_slice(dim, dim, out.as_slice());
        FockDensityMatrix::new(self.n, rho)
    }

    // ---- sector representation ------------------------------------------

    fn sector_index(&self, s: usize, i: usize, j: usize) -> usize {
        self.offset[s] + i * self.size[s] + j
    }

    fn dense_to_sectors(&self, rho: &DMatrix<C64>) -> Vec<C64> {
        let n = self.n;
        let mut v = vec![C64::default(); self.total_len];
        for s in 0..(2 * n - 1) {
            let lo = self.lo[s];
            for i in 0..self.size[s] {
                for j in 0..self.size[s] {
                    let r = (lo + i) * n + (s - lo - i);
                    let c = (lo + j) * n + (s - lo - j);
                    v[self.sector_index(s, i, j)] = rho[(r, c)];
                }
            }
        }
        v
    }

    fn sectors_to_dense(&self, v: &[C64]) -> DMatrix<C64> {
        let n = self.n;
        let dim = n * n;
        let mut rho = DMatrix::<C64>::zeros(dim, dim);
        for s in 0..(2 * n - 1) {
            let lo = self.lo[s];
            for i in 0..self.size[s] {
                for j in 0..self.size[s] {
                    let r = (lo + i) * n + (s - lo - i);
                    let c = (lo + j) * n + (s - lo - j);
                    rho[(r, c)] = v[self.sector_index(s, i, j)];
                }
            }
        }
        rho
    }

    /// How much of a matrix lies outside the equal-total-number sectors.
    fn off_sector_mass(&self, rho: &DMatrix<C64>) -> f64 {
        let n = self.n;
        let mut max = 0.0_f64;
        for n1 in 0..n {
            for n2 in 0..n {
                for m1 in 0..n {
                    for m2 in 0..n {
                        if n1 + n2 != m1 + m2 {
                            max = max.max(rho[(n1 * n + n2, m1 * n + m2)].norm());
                        }
                    }
                }
            }
        }
        max
    }

    /// ℒ applied within the sector representation. Mirrors `apply_dense`
    /// term by term; the two are kept in agreement by tests.
    fn apply_sectors(&self, v: &[C64], out: &mut [C64]) {
        let n = self.n;
        let j = self.params.j;
        let g1up = self.params.gamma1 * (self.params.nbar1 + 1.0);
        let g1dn = self.params.gamma1 * self.params.nbar1;
        let g2up = self.params.gamma2 * (self.params.nbar2 + 1.0);
        let g2dn = self.params.gamma2 * self.params.nbar2;

        for s in 0..(2 * n - 1) {
            let lo = self.lo[s];
            let sz = self.size[s];
            for i in 0..sz {
                let n1 = lo + i;
                let n2 = s - n1;
                let kr = n1 * n + n2;
                let er = self.energies[kr];
                let gr = self.damping[kr];
                // Row-shift coefficients within the block (tunnelling on the
                // ket side): source rows i−1 ↔ (n₁−1, n₂+1), i+1 ↔ (n₁+1, n₂−1).
                let t_dn = if i > 0 && n2 + 1 < n { self.sq[n1] * self.sq[n2 + 1] } else { 0.0 };
                let t_up =
                    if i + 1 < sz && n2 > 0 { self.sq[n1 + 1] * self.sq[n2] } else { 0.0 };

                for jj in 0..sz {
                    let m1 = lo + jj;
                    let m2 = s - m1;
                    let kc = m1 * n + m2;
                    let idx = self.sector_index(s, i, jj);

                    let mut acc = C64::new(
                        -(gr + self.damping[kc]),
                        -(er - self.energies[kc]),
                    ) * v[idx];

                    let mut hop = C64::default();
                    if t_dn != 0.0 {
                        hop += t_dn * v[self.sector_index(s, i - 1, jj)];
                    }
                    if t_up != 0.0 {
                        hop += t_up * v[self.sector_index(s, i + 1, jj)];
                    }
                    if jj > 0 && m2 + 1 < n {
                        hop -= self.sq[m1] * self.sq[m2 + 1] * v[self.sector_index(s, i, jj - 1)];
                    }
                    if jj + 1 < sz && m2 > 0 {
                        hop -= self.sq[m1 + 1] * self.sq[m2] * v[self.sector_index(s, i, jj + 1)];
                    }
                    acc += C64::new(0.0, j) * hop;

                    // Jumps couple to the neighboring sectors: a ϱ a† reads
                    // s+1, a† ϱ a reads s−1, with ket and bra shifted alike.
                    if n1 + 1 < n && m1 + 1 < n {
                        let lo_up = self.lo[s + 1];
                        acc += g1up
                            * self.sq[n1 + 1]
                            * self.sq[m1 + 1]
                            * v[self.sector_index(s + 1, n1 + 1 - lo_up, m1 + 1 - lo_up)];
                    }
                    if n2 + 1 < n && m2 + 1 < n {
                        let lo_up = self.lo[s + 1];
                        acc += g2up
                            * self.sq[n2 + 1]
                            * self.sq[m2 + 1]
                            * v[self.sector_index(s + 1, n1 - lo_up, m1 - lo_up)];
                    }
                    if n1 > 0 && m1 > 0 {
                        let lo_dn = self.lo[s - 1];
                        acc += g1dn
                            * self.sq[n1]
                            * self.sq[m1]
                            * v[self.sector_index(s - 1, n1 - 1 - lo_dn, m1 - 1 - lo_dn)];
                    }
                    if n2 > 0 && m2 > 0 {
                        let lo_dn = self.lo[s - 1];
                        acc += g2dn
                            * self.sq[n2]
                            * self.sq[m2]
                            * v[self.sector_index(s - 1, n1 - lo_dn, m1 - lo_dn)];
                    }
                    out[idx] = acc;
                }
            }
        }
    }
}

/// A sampled Fock-space trajectory with its truncation report.
#[derive(Debug, Clone)]
pub struct FockTrajectory {
    /// (time, state) samples, starting at t = 0.
    pub samples: Vec<(f64, FockDensityMatrix)>,
    /// Largest last-level population seen along the run.
    pub max_tail_mass: f64,
    /// Whether the run stayed below [`super::TAIL_MASS_BOUND`] throughout.
    pub truncation_safe: bool,
}

/// Integrate the master equation from the truncated thermal product state
/// fixed by the reservoir occupations.
pub fn evolve_fock(
    params: &ModelParams,
    cutoff: usize,
    t_max: f64,
    dt_out: f64,
) -> Result<FockTrajectory> {
    let initial = FockDensityMatrix::thermal_product(cutoff, params.nbar1, params.nbar2)?;
    evolve_fock_from(params, &initial, t_max, dt_out)
}

/// Integrate the master equation from a given initial state supported on the
/// equal-total-number sectors (any number-diagonal state qualifies). RK4
/// with fixed step ≤ 10⁻³, deterministic for fixed inputs.
pub fn evolve_fock_from(
    params: &ModelParams,
    initial: &FockDensityMatrix,
    t_max: f64,
    dt_out: f64,
) -> Result<FockTrajectory> {
    let mut samples = Vec::new();
    let report = evolve_fock_with(params, initial, t_max, dt_out, |t, state| {
        samples.push((t, state.clone()));
        Ok(())
    })?;
    Ok(FockTrajectory {
        samples,
        max_tail_mass: report.0,
        truncation_safe: report.1,
    })
}

/// Streaming form of [`evolve_fock_from`]: the observer sees every sample
/// without the trajectory being stored. Returns (max tail mass, safe flag).
pub fn evolve_fock_with<F>(
    params: &ModelParams,
    initial: &FockDensityMatrix,
    t_max: f64,
    dt_out: f64,
    mut observe: F,
) -> Result<(f64, bool)>
where
    F: FnMut(f64, &FockDensityMatrix) -> Result<()>,
{
    if !(t_max > 0.0) || !(dt_out > 0.0) {
        return Err(Error::Domain(format!(
            "t_max and dt_out must be positive, got t_max = {t_max}, dt_out = {dt_out}"
        )));
    }
    let liouv = Liouvillian::new(params, initial.cutoff())?;
    let off = liouv.off_sector_mass(initial.matrix());
    if off > 1e-12 {
        return Err(Error::Domain(format!(
            "initial state has weight {off:.3e} outside the equal-total-number sectors; \
             the fixed-step engine requires a number-diagonal initial state \
             (use the dense propagator for small cutoffs instead)"
        )));
    }

    let steps_per_sample = ((dt_out / FOCK_STEP) - 1e-9).ceil().max(1.0) as usize;
    let h = dt_out / steps_per_sample as f64;
    let n_samples = (t_max / dt_out + 1e-9).floor() as usize;

    let mut state = liouv.dense_to_sectors(initial.matrix());
    let len = state.len();
    let mut k1 = vec![C64::default(); len];
    let mut k2 = vec![C64::default(); len];
    let mut k3 = vec![C64::default(); len];
    let mut k4 = vec![C64::default(); len];
    let mut work = vec![C64::default(); len];

    let mut max_tail = initial.tail_mass();
    observe(0.0, initial)?;

    for sample in 1..=n_samples {
        for _ in 0..steps_per_sample {
            liouv.apply_sectors(&state, &mut k1);
            for i in 0..len {
                work[i] = state[i] + k1[i] * (h / 2.0);
            }
            liouv.apply_sectors(&work, &mut k2);
            for i in 0..len {
                work[i] = state[i] + k2[i] * (h / 2.0);
            }
            liouv.apply_sectors(&work, &mut k3);
            for i in 0..len {
                work[i] = state[i] + k3[i] * h;
            }
            liouv.apply_sectors(&work, &mut k4);
            for i in 0..len {
                state[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0);
            }
        }
        let t = sample as f64 * dt_out;
        if !state.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::IntegrationFailure { t, reason: "non-finite state".into() });
        }
        let rho = liouv.sectors_to_dense(&state);
        let fock = FockDensityMatrix::new(initial.cutoff(), rho).map_err(|e| {
            Error::IntegrationFailure { t, reason: format!("state invariant violated: {e}") }
        })?;
        max_tail = max_tail.max(fock.tail_mass());
        observe(t, &fock)?;
    }
    Ok((max_tail, max_tail < super::TAIL_MASS_BOUND))
}

/// Matrix exponential by scaling and squaring with a diagonal Padé(13)
/// approximant. Adequate for the modest superoperator dimensions used here.
pub fn expm(a: &DMatrix<C64>) -> DMatrix<C64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm needs a square matrix");
    // 1-norm scaling.
    let norm = (0..n)
        .map(|c| (0..n).map(|r| a[(r, c)].norm()).sum::<f64>())
        .fold(0.0_f64, f64::max);
    let theta13 = 5.371_920_351_148_152;
    let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
    let scaled = a * C64::new(0.5_f64.powi(s), 0.0);

    const B: [f64; 14] = [
        64_764_752_532_480_000.0,
        32_382_376_266_240_000.0,
        7_771_770_303_897_600.0,
        1_187_353_796_428_800.0,
        129_060_195_264_000.0,
        10_559_470_521_600.0,
        670_442_572_800.0,
        33_522_128_640.0,
        1_323_241_920.0,
        40_840_800.0,
        960_960.0,
        16_380.0,
        182.0,
        1.0,
    ];
    let cb = |x: f64| C64::new(x, 0.0);
    let id = DMatrix::<C64>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (&a6 * cb(B[13]) + &a4 * cb(B[11]) + &a2 * cb(B[9]))
        + &a6 * cb(B[7])
        + &a4 * cb(B[5])
        + &a2 * cb(B[3])
        + &id * cb(B[1]);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * cb(B[12]) + &a4 * cb(B[10]) + &a2 * cb(B[8]))
        + &a6 * cb(B[6])
        + &a4 * cb(B[4])
        + &a2 * cb(B[2])
        + &id * cb(B[0]);
    let num = &v + &u;
    let den = &v - &u;
    let mut result = den
        .lu()
        .solve(&num)
        .expect("Padé denominator is invertible for scaled matrices");
    for _ in 0..s {
        result = &result * &result;
    }
    result
}
