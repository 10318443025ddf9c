//! Dissipative Gaussian dynamics in the quadratic regime (U = 0).
//!
//! With each well coupled to its own thermal reservoir the covariance matrix
//! obeys the linear equation
//!
//!   σ̇ = Aσ + σAᵀ + D,     ⟨P̂⟩̇ = A⟨P̂⟩,
//!
//! where A = ΩW − ½ diag(γ₁, γ₁, γ₂, γ₂) combines the Hamiltonian quadratic
//! form W with local damping, and D = diag(γ₁(2n̄₁+1), γ₁(2n̄₁+1),
//! γ₂(2n̄₂+1), γ₂(2n̄₂+1)) is the diffusion from the reservoirs. The module
//! integrates this system with a fixed-step RK4 scheme, solves the stationary
//! Lyapunov equation directly, and locates the instants of accidental local
//! thermalisation.

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};

use crate::error::{Error, Result};
use crate::gaussian::{symplectic_form, CovarianceMatrix, GaussianState, PHYSICAL_HARD_TOL};
use crate::params::ModelParams;

/// Drift and diffusion matrices of the quadratic open dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftDiffusion {
    /// Drift A = ΩW − ½ diag(γ₁, γ₁, γ₂, γ₂).
    pub drift: Matrix4<f64>,
    /// Diffusion D, diagonal and nonnegative.
    pub diffusion: Matrix4<f64>,
}

impl DriftDiffusion {
    /// Assemble the generators from model parameters. The quadratic form
    ///
    /// ```text
    ///     ⎛ 1    0   −J    0  ⎞
    /// W = ⎜ 0    1    0   −J  ⎟        (ω₂ = 1 + Δ)
    ///     ⎜ −J   0    ω₂   0  ⎟
    ///     ⎝ 0   −J    0    ω₂ ⎠
    /// ```
    ///
    /// reproduces the coupled first- and second-moment equations of the
    /// master equation term by term.
    pub fn assemble(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        params.require_quadratic()?;
        let j = params.j;
        let w2 = params.omega2();
        let w = Matrix4::new(
            1.0, 0.0, -j, 0.0, //
            0.0, 1.0, 0.0, -j, //
            -j, 0.0, w2, 0.0, //
            0.0, -j, 0.0, w2,
        );
        let damping = Matrix4::from_diagonal(&Vector4::new(
            params.gamma1, params.gamma1, params.gamma2, params.gamma2,
        ));
        let drift = symplectic_form() * w - damping * 0.5;
        let d1 = params.gamma1 * (2.0 * params.nbar1 + 1.0);
        let d2 = params.gamma2 * (2.0 * params.nbar2 + 1.0);
        let diffusion = Matrix4::from_diagonal(&Vector4::new(d1, d1, d2, d2));
        Ok(Self { drift, diffusion })
    }

    /// Right-hand side σ̇ = Aσ + σAᵀ + D.
    pub fn sigma_dot(&self, sigma: &Matrix4<f64>) -> Matrix4<f64> {
        self.drift * sigma + sigma * self.drift.transpose() + self.diffusion
    }

    /// Right-hand side of the first moments, ⟨P̂⟩̇ = A⟨P̂⟩.
    pub fn displacement_dot(&self, displacement: &Vector4<f64>) -> Vector4<f64> {
        self.drift * displacement
    }
}

/// A sampled covariance trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Strictly increasing sample times, starting at 0.
    pub times: Vec<f64>,
    /// Gaussian state at each sample time.
    pub states: Vec<GaussianState>,
    /// Parameters that generated the trajectory.
    pub params: ModelParams,
}

/// Fixed integration step: h = min(5·10⁻⁴, 5·10⁻³ / max(1, Γ, γ₁, γ₂)),
/// rounded down so that an integer number of steps lands exactly on each
/// output sample. Keeps the RK4 global error below ~10⁻⁹ in max-norm for the
/// parameter ranges of interest.
fn step_size(params: &ModelParams, dt_out: f64) -> Result<(f64, usize)> {
    let splitting = (params.delta * params.delta + 4.0 * params.j * params.j).sqrt();
    let scale = splitting.max(params.gamma1).max(params.gamma2).max(1.0);
    let target = (5e-4_f64).min(5e-3 / scale);
    let steps = (dt_out / target).ceil() as usize;
    if steps == 0 || steps > 50_000_000 {
        return Err(Error::IntegrationFailure {
            t: 0.0,
            reason: format!("step size underflow: {steps} steps per output sample"),
        });
    }
    Ok((dt_out / steps as f64, steps))
}

fn rk4_step(gen: &DriftDiffusion, sigma: &mut Matrix4<f64>, disp: &mut Vector4<f64>, h: f64) {
    let k1s = gen.sigma_dot(sigma);
    let k1d = gen.displacement_dot(disp);
    let k2s = gen.sigma_dot(&(*sigma + k1s * (h / 2.0)));
    let k2d = gen.displacement_dot(&(*disp + k1d * (h / 2.0)));
    let k3s = gen.sigma_dot(&(*sigma + k2s * (h / 2.0)));
    let k3d = gen.displacement_dot(&(*disp + k2d * (h / 2.0)));
    let k4s = gen.sigma_dot(&(*sigma + k3s * h));
    let k4d = gen.displacement_dot(&(*disp + k3d * h));
    *sigma += (k1s + k2s * 2.0 + k3s * 2.0 + k4s) * (h / 6.0);
    *disp += (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6.0);
}

/// Integrate the open dynamics from the thermal product state fixed by the
/// reservoir occupations, sampling every `dt_out` up to `t_max`.
pub fn evolve(params: &ModelParams, t_max: f64, dt_out: f64) -> Result<Trajectory> {
    let initial = GaussianState::thermal(params.nbar1, params.nbar2)?;
    evolve_from(params, &initial, t_max, dt_out)
}

/// Integrate the open dynamics from an arbitrary Gaussian initial state.
pub fn evolve_from(
    params: &ModelParams,
    initial: &GaussianState,
    t_max: f64,
    dt_out: f64,
) -> Result<Trajectory> {
    if !(t_max > 0.0) || !(dt_out > 0.0) {
        return Err(Error::Domain(format!(
            "t_max and dt_out must be positive, got t_max = {t_max}, dt_out = {dt_out}"
        )));
    }
    let gen = DriftDiffusion::assemble(params)?;
    let (h, steps_per_sample) = step_size(params, dt_out)?;
    // Guard against 5.0/0.1 = 49.999… flooring one sample short.
    let n_samples = (t_max / dt_out + 1e-9).floor() as usize;

    let mut sigma = *initial.cov.matrix();
    let mut disp = initial.displacement;
    let mut times = Vec::with_capacity(n_samples + 1);
    let mut states = Vec::with_capacity(n_samples + 1);
    times.push(0.0);
    states.push(*initial);

    for k in 1..=n_samples {
        for _ in 0..steps_per_sample {
            rk4_step(&gen, &mut sigma, &mut disp, h);
        }
        let t = k as f64 * dt_out;
        if !sigma.iter().all(|v| v.is_finite()) || !disp.iter().all(|v| v.is_finite()) {
            return Err(Error::IntegrationFailure { t, reason: "non-finite state".into() });
        }
        let cov = CovarianceMatrix::from_matrix_unchecked(sigma);
        let (_, nu_min) = cov.symplectic_eigenvalues();
        if nu_min < 1.0 - PHYSICAL_HARD_TOL {
            return Err(Error::IntegrationFailure {
                t,
                reason: format!("state turned unphysical (min symplectic eigenvalue {nu_min})"),
            });
        }
        times.push(t);
        states.push(GaussianState { displacement: disp, cov });
    }
    Ok(Trajectory { times, states, params: *params })
}

/// Stationary covariance matrix: the solution of Aσ + σAᵀ + D = 0, obtained
/// by a direct dense solve of the 16-unknown linear system
/// (𝟙⊗A + A⊗𝟙) vec σ = −vec D.
pub fn steady_state(params: &ModelParams) -> Result<CovarianceMatrix> {
    let gen = DriftDiffusion::assemble(params)?;
    if params.gamma1 == 0.0 && params.gamma2 == 0.0 {
        return Err(Error::NoSteadyState);
    }
    let a = DMatrix::from_column_slice(4, 4, gen.drift.as_slice());
    let eye = DMatrix::<f64>::identity(4, 4);
    let k = eye.kronecker(&a) + a.kronecker(&eye);
    let rhs = DVector::from_column_slice(gen.diffusion.as_slice()) * -1.0;
    let sol = k.lu().solve(&rhs).ok_or(Error::NoSteadyState)?;
    let sigma = Matrix4::from_column_slice(sol.as_slice());
    if !sigma.iter().all(|v| v.is_finite()) {
        return Err(Error::NoSteadyState);
    }
    // An undamped decoupled subsystem can slip through LU with a huge
    // residual; reject anything that does not actually solve the equation.
    let residual = gen.sigma_dot(&sigma).amax();
    if residual > 1e-8 {
        return Err(Error::NoSteadyState);
    }
    Ok(CovarianceMatrix::from_matrix_unchecked(sigma))
}

/// Closed-form stationary covariance for symmetric damping γ₁ = γ₂ = γ > 0:
///
/// ```text
/// ζ = (γ² + Δ²)/(4J² + γ² + Δ²)
/// m_j  = ζ [4J²(n̄₁+n̄₂+1)/(γ²+Δ²) + (2n̄_j+1)]
/// c_x  = ζ · 2JΔ(n̄₁−n̄₂)/(γ²+Δ²)       (x₁x₂ and p₁p₂)
/// c_p  = ζ · 2Jγ(n̄₁−n̄₂)/(γ²+Δ²)       (x₁p₂; p₁x₂ carries −c_p)
/// ```
///
/// The sign of c_x follows from the stationary block equations
/// γ c_x = Δ c_p and c_p (4J² + γ² + Δ²) = 2Jγ(n̄₁−n̄₂), and agrees with the
/// unitary transient, whose x₁x₂ correlation grows as
/// +4JΔ(n̄₁−n̄₂)sin²(Γt/2)/Γ². Serves as an independent cross-check of
/// [`steady_state`].
pub fn steady_state_analytic(params: &ModelParams) -> Result<CovarianceMatrix> {
    params.validate()?;
    params.require_quadratic()?;
    if params.gamma1 != params.gamma2 {
        return Err(Error::UnsupportedRegime(
            "closed-form steady state needs γ₁ = γ₂".into(),
        ));
    }
    let gamma = params.gamma1;
    if gamma == 0.0 {
        return Err(Error::NoSteadyState);
    }
    let (nb1, nb2) = (params.nbar1, params.nbar2);
    let delta = params.delta;
    let j = params.j;
    let g2d2 = gamma * gamma + delta * delta;
    let zeta = g2d2 / (4.0 * j * j + g2d2);
    let shared = 4.0 * j * j * (nb1 + nb2 + 1.0) / g2d2;
    let m1 = zeta * (shared + 2.0 * nb1 + 1.0);
    let m2 = zeta * (shared + 2.0 * nb2 + 1.0);
    let cx = zeta * 2.0 * j * delta * (nb1 - nb2) / g2d2;
    let cp = zeta * 2.0 * j * gamma * (nb1 - nb2) / g2d2;
    Ok(CovarianceMatrix::from_matrix_unchecked(Matrix4::new(
        m1, 0.0, cx, cp, //
        0.0, m1, -cp, cx, //
        cx, -cp, m2, 0.0, //
        cp, cx, 0.0, m2,
    )))
}

/// Instants of accidental local thermalisation for Δ = 0 and γ₁ = γ₂ = γ:
/// the roots in (0, t_max] of
///
///   e^{γt} = cos(2Jt) − (2J/γ) sin(2Jt),
///
/// at which the off-diagonal covariance block vanishes and each well is
/// exactly locally thermal. The right-hand side is bounded by
/// √(1 + 4J²/γ²), so no roots exist beyond t = ln√(1 + 4J²/γ²)/γ; the search
/// scans a grid of step π/(20J) for sign changes and refines each bracket by
/// bisection until |f(t)| < 10⁻¹². Roots are independent of the reservoir
/// temperatures.
pub fn find_thermalisation_times(gamma: f64, j: f64, t_max: f64) -> Result<Vec<f64>> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::Domain(format!("j must be > 0, got {j}")));
    }
    if !(t_max > 0.0) {
        return Err(Error::Domain(format!("t_max must be > 0, got {t_max}")));
    }

    let f = |t: f64| (gamma * t).exp() - (2.0 * j * t).cos() + (2.0 * j / gamma) * (2.0 * j * t).sin();

    // Amplitude bound on the oscillatory side.
    let bound = (1.0 + 4.0 * j * j / (gamma * gamma)).sqrt();
    let t_stop = (bound.ln() / gamma).min(t_max);
    let dt = std::f64::consts::PI / (20.0 * j);

    let mut roots = Vec::new();
    let mut t_prev = 0.0;
    let mut f_prev = 0.0; // f(0) = 0 is the trivial root, excluded from (0, t_max]
    let mut k = 1usize;
    loop {
        let t = (k as f64 * dt).min(t_stop + dt).min(t_max);
        let ft = f(t);
        if f_prev * ft < 0.0 {
            roots.push(bisect(&f, t_prev, f_prev, t, ft));
        }
        if t >= t_max || t >= t_stop + dt {
            break;
        }
        t_prev = t;
        f_prev = ft;
        k += 1;
    }
    roots.retain(|&r| r > 0.0 && r <= t_max);
    Ok(roots)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut flo: f64, mut hi: f64, _fhi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid.abs() < 1e-12 || (hi - lo) < f64::EPSILON * mid.abs() {
            return mid;
        }
        if flo * fmid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    0.5 * (lo + hi)
}

/// Effective local thermal occupations of the two wells at time `t` along
/// the open evolution from the thermal initial state:
/// n̄_j^eff = (σ_xx,j + σ_pp,j)/4 − 1/2.
pub fn local_occupations_at(params: &ModelParams, t: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((params.nbar1, params.nbar2));
    }
    let traj = evolve(params, t, t)?;
    let state = traj.states.last().expect("trajectory has at least the initial state");
    Ok(state.cov.local_occupations())
}
