//! The reduced system for `(ρ, w)` and its contraction iteration.
//!
//! The exact equations are
//!
//! ```text
//! aʳ/ω  = εc ℱ̂ʳ
//! a^θ/ω = εc ℱ̂^θ + (r'/r)(εc ℱ̂ʳ − aʳ/ω)
//! ```
//!
//! in units of `ω₀r₀`, where `ℱ̂` adds the centrifugal term of the axial
//! rotation to the Newtonian force. Writing `Eʳ`, `E^θ` for the residuals of
//! the two lines, the iteration is
//!
//! ```text
//! x ← (0, w̄) + L⁻¹(Ñ(x)),   Ñ = L x − (½ cos θ, 0) + P(E/ε)
//! ```
//!
//! with `P` removing the mean of both components and the first harmonics of
//! the second. `L` is diagonal in Fourier space and inverted exactly.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{acceleration_over_omega, w_bar, ShapeState, TorusConfig};
use crate::kernels::{newtonian_forces, Forces};
use crate::quadrature::QuadratureScheme;
use crate::spectra::{bracket_of_samples, theta_grid, Admissible, PeriodicSeries};

/// Iteration parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub modes: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub ball_radius: f64,
    pub theta_nodes: usize,
    pub quad: QuadratureScheme,
}

impl SolverConfig {
    /// Defaults for a truncation: `M = 2‖(0, w̄)‖_X` and `2N + 1` collocation points.
    pub fn new(modes: usize) -> Self {
        Self {
            modes,
            tol: 1e-10,
            max_iter: 50,
            ball_radius: 2.0 * ShapeState::initial(modes.max(1)).x_norm(),
            theta_nodes: 2 * modes + 1,
            quad: QuadratureScheme::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes < 4 {
            return Err(Error::InvalidConfig(format!("modes must be at least 4, got {}", self.modes)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if !(self.ball_radius > 0.0) {
            return Err(Error::InvalidConfig("ball radius must be positive".into()));
        }
        if self.theta_nodes < 2 * self.modes + 1 {
            return Err(Error::InvalidConfig(format!(
                "theta_nodes = {} cannot resolve {} modes (need {})",
                self.theta_nodes,
                self.modes,
                2 * self.modes + 1
            )));
        }
        self.quad.validate()
    }
}

/// `L(ρ, w) = (p, v)`, mode by mode.
pub fn apply_l(state: &ShapeState) -> (PeriodicSeries, PeriodicSeries) {
    let n_max = state.modes();
    let mut p = PeriodicSeries::zeros(n_max);
    let mut v = PeriodicSeries::zeros(n_max);
    p.set_mode(1, -2.0 * state.w.cos_coeff(1), -2.0 * state.w.sin_coeff(1));
    for n in 2..=n_max {
        let k = n as f64;
        let (r1, r2) = (state.rho.cos_coeff(n), state.rho.sin_coeff(n));
        let (w1, w2) = (state.w.cos_coeff(n), state.w.sin_coeff(n));
        let diag = -k * k + k - 2.0;
        p.set_mode(n, diag * r1 - 2.0 * w1, diag * r2 - 2.0 * w2);
        v.set_mode(n, 2.0 * k * r2 + (k + 1.0) * w2, -2.0 * k * r1 - (k + 1.0) * w1);
    }
    (p, v)
}

/// Exact inverse of [`apply_l`] on zero-mean `p` and `v` without first harmonics.
pub fn invert_l(p: &PeriodicSeries, v: &PeriodicSeries) -> Result<ShapeState> {
    let excluded = p
        .half_a0()
        .abs()
        .max(v.half_a0().abs())
        .max(v.cos_coeff(1).abs())
        .max(v.sin_coeff(1).abs());
    if excluded != 0.0 {
        return Err(Error::Precondition(format!(
            "L⁻¹ needs zero means and no first harmonic in v (found {excluded:e})"
        )));
    }
    let n_max = p.truncation().max(v.truncation());
    let mut rho = PeriodicSeries::zeros(n_max);
    let mut w = PeriodicSeries::zeros(n_max);
    if n_max >= 1 {
        w.set_mode(1, -0.5 * p.cos_coeff(1), -0.5 * p.sin_coeff(1));
    }
    for n in 2..=n_max {
        let k = n as f64;
        let det = (k - 1.0) * (k - 1.0) * (k + 2.0);
        let diag = -k * k + k - 2.0;
        // cos pair: diag·ρ¹ − 2w¹ = p¹ and −2kρ¹ − (k+1)w¹ = v²
        let (pc, vs) = (p.cos_coeff(n), v.sin_coeff(n));
        let r1 = (-(k + 1.0) * pc + 2.0 * vs) / det;
        let w1 = (2.0 * k * pc + diag * vs) / det;
        // sin pair: diag·ρ² − 2w² = p² and 2kρ² + (k+1)w² = v¹
        let (ps, vc) = (p.sin_coeff(n), v.cos_coeff(n));
        let r2 = ((k + 1.0) * ps + 2.0 * vc) / -det;
        let w2 = (-2.0 * k * ps + diag * vc) / -det;
        rho.set_mode(n, r1, r2);
        w.set_mode(n, w1, w2);
    }
    Ok(ShapeState::new(rho, w))
}

/// Collocation samples of the right-hand sides for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct RightHandSides {
    pub grid: Vec<f64>,
    /// `ℱʳ` in units of `ω₀r₀·εc`.
    pub fr: Vec<f64>,
    /// `ℱ^θ` in units of `ω₀r₀·εc`.
    pub ftheta: Vec<f64>,
    /// `⟨f/ω⟩` in units of `ω₀r₀·εc`.
    pub mean_f: f64,
    /// `⟨1/((1 + εw)(1 + ε(1 + ερ)cos θ)³)⟩`, the scaled inertia bracket.
    pub mean_weight: f64,
}

fn centrifugal_weight(state: &ShapeState, eps: f64, theta: f64) -> f64 {
    let p = 1.0 + eps * state.radius_ratio(eps, theta) * theta.cos();
    1.0 / (state.rate_ratio(eps, theta) * p * p * p)
}

/// Adds the centrifugal term fixed by the momentum constant `J²`.
pub fn right_hand_sides(state: &ShapeState, eps: f64, forces: &Forces) -> RightHandSides {
    let weights: Vec<f64> = forces.grid.iter().map(|&t| centrifugal_weight(state, eps, t)).collect();
    let mean_weight = bracket_of_samples(&weights);
    let mut fr = Vec::with_capacity(weights.len());
    let mut ftheta = Vec::with_capacity(weights.len());
    for (j, &t) in forces.grid.iter().enumerate() {
        let centrifugal = -weights[j] / mean_weight * forces.mean_f;
        fr.push(forces.fr[j] + t.cos() * centrifugal);
        ftheta.push(forces.ftheta[j] - t.sin() * centrifugal);
    }
    RightHandSides {
        grid: forces.grid.clone(),
        fr,
        ftheta,
        mean_f: forces.mean_f,
        mean_weight,
    }
}

/// `J²` and `Ω²(θ) = J²/(R + r cos θ)⁴` in physical units.
pub fn omega_sq_and_j(
    state: &ShapeState,
    cfg: &TorusConfig,
    c_eps: f64,
    mean_f: f64,
    mean_weight: f64,
) -> Result<(f64, PeriodicSeries)> {
    if !(mean_f < 0.0) {
        return Err(Error::InvalidRegime { mean_force: mean_f });
    }
    let big_r = cfg.big_r();
    let j_sq = -cfg.omega0 * cfg.omega0 * cfg.r0 * cfg.epsilon * c_eps * big_r.powi(3) * mean_f / mean_weight;
    let modes = 2 * state.modes();
    let omega_sq = PeriodicSeries::from_fn(2 * modes + 1, modes, |t| {
        let arm = big_r + cfg.r0 * state.radius_ratio(cfg.epsilon, t) * t.cos();
        j_sq / arm.powi(4)
    })?;
    Ok((j_sq, omega_sq))
}

/// `c(ε)`, the raw residual samples and the projected nonlinear remainders.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub c_eps: f64,
    /// `Eʳ = εcℱʳ − aʳ/ω` on the grid (units of `ω₀r₀`).
    pub er: Vec<f64>,
    /// `E^θ = εcℱ^θ + (r'/r)Eʳ − a^θ/ω` on the grid.
    pub etheta: Vec<f64>,
    pub nr_tilde: PeriodicSeries,
    pub ntheta_tilde: PeriodicSeries,
}

impl Residual {
    /// Largest pointwise residual, divided by ε.
    pub fn max_scaled(&self, eps: f64) -> f64 {
        self.er
            .iter()
            .chain(&self.etheta)
            .fold(0.0f64, |m, v| m.max(v.abs()))
            / eps
    }
}

pub fn compute_c_and_residual(
    state: &ShapeState,
    eps: f64,
    rhs: &RightHandSides,
    modes: usize,
) -> Result<Residual> {
    let cfg = TorusConfig::unit(eps)?;
    let (ar, at) = acceleration_over_omega(state, &cfg);
    let rho1 = state.rho.derivative(1);
    let ar_s: Vec<f64> = rhs.grid.iter().map(|&t| ar.eval(t)).collect();
    let at_s: Vec<f64> = rhs.grid.iter().map(|&t| at.eval(t)).collect();
    let c_eps = bracket_of_samples(&ar_s) / (eps * bracket_of_samples(&rhs.fr));

    let mut er = Vec::with_capacity(ar_s.len());
    let mut etheta = Vec::with_capacity(ar_s.len());
    for (j, &t) in rhs.grid.iter().enumerate() {
        let e_r = eps * c_eps * rhs.fr[j] - ar_s[j];
        let log_slope = eps * rho1.eval(t) / state.radius_ratio(eps, t);
        er.push(e_r);
        etheta.push(eps * c_eps * rhs.ftheta[j] + log_slope * e_r - at_s[j]);
    }
    let scaled = |v: &[f64]| -> Result<PeriodicSeries> {
        let s: Vec<f64> = v.iter().map(|x| x / eps).collect();
        PeriodicSeries::analyze(&s, modes)
    };
    let (p, v) = apply_l(&state.projected());
    let mut nr = &p.resized(modes) + &scaled(&er)?;
    nr.set_mode(1, nr.cos_coeff(1) - 0.5, nr.sin_coeff(1));
    let nr_tilde = nr.project(Admissible::Rate);
    let ntheta_tilde = (&v.resized(modes) + &scaled(&etheta)?).high_pass(2);
    Ok(Residual {
        c_eps,
        er,
        etheta,
        nr_tilde,
        ntheta_tilde,
    })
}

/// `G(x) = (0, w̄) + L⁻¹(Ñ(x))`.
pub fn fixed_point_map(residual: &Residual, modes: usize) -> Result<ShapeState> {
    let delta = invert_l(&residual.nr_tilde, &residual.ntheta_tilde)?;
    Ok(ShapeState::new(delta.rho, &delta.w + &w_bar(modes)))
}

/// One step of the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub step: f64,
    pub x_norm: f64,
    pub c_eps: f64,
    pub max_scaled_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub iterations: usize,
    pub final_step: f64,
    /// Largest ratio of consecutive steps.
    pub contraction_ratio: f64,
    pub history: Vec<IterationRecord>,
    pub quadrature_error: f64,
    pub mean_f: f64,
    pub mean_weight: f64,
}

/// A converged motion with its reconstructed profiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    pub torus: TorusConfig,
    pub solver: SolverConfig,
    pub state: ShapeState,
    pub s: PeriodicSeries,
    #[serde(rename = "Omega")]
    pub omega: PeriodicSeries,
    pub j_sq: f64,
    pub c_flux: f64,
    pub c_eps: f64,
    pub diagnostics: Diagnostics,
}

/// Evaluates forces and the residual at one state.
pub fn evaluate_state(
    state: &ShapeState,
    eps: f64,
    solver: &SolverConfig,
    estimate_error: bool,
) -> Result<(Forces, RightHandSides, Residual)> {
    let forces = newtonian_forces(state, eps, &solver.quad, solver.theta_nodes, estimate_error)?;
    if !(forces.mean_f < 0.0) {
        return Err(Error::InvalidRegime {
            mean_force: forces.mean_f,
        });
    }
    let rhs = right_hand_sides(state, eps, &forces);
    let residual = compute_c_and_residual(state, eps, &rhs, solver.modes)?;
    Ok((forces, rhs, residual))
}

pub fn fixed_point_solve(cfg: &TorusConfig, solver: &SolverConfig) -> Result<EquilibriumSolution> {
    fixed_point_solve_with(cfg, solver, |_| {})
}

/// Like [`fixed_point_solve`], reporting every iteration to `observe`.
pub fn fixed_point_solve_with(
    cfg: &TorusConfig,
    solver: &SolverConfig,
    mut observe: impl FnMut(&IterationRecord),
) -> Result<EquilibriumSolution> {
    solver.validate()?;
    let eps = cfg.epsilon;
    let modes = solver.modes;
    let mut x = ShapeState::initial(modes);
    let mut history: Vec<IterationRecord> = Vec::new();
    let mut contraction_ratio: f64 = 0.0;

    for iteration in 1..=solver.max_iter {
        let (_, _, residual) = evaluate_state(&x, eps, solver, false)?;
        let next = fixed_point_map(&residual, modes)?;
        let step = next.x_distance(&x);
        let x_norm = next.x_norm();
        let record = IterationRecord {
            iteration,
            step,
            x_norm,
            c_eps: residual.c_eps,
            max_scaled_residual: residual.max_scaled(eps),
        };
        observe(&record);
        if let Some(prev) = history.last() {
            if prev.step > 0.0 {
                contraction_ratio = contraction_ratio.max(step / prev.step);
            }
        }
        history.push(record);
        if !(x_norm <= solver.ball_radius) {
            return Err(Error::OutsideBall {
                iteration,
                norm: x_norm,
                radius: solver.ball_radius,
            });
        }
        next.check_nondegenerate(eps)?;
        x = next;
        if step < solver.tol {
            return finish(cfg, solver, x, history, contraction_ratio);
        }
    }
    Err(Error::NoConvergence {
        iterations: solver.max_iter,
        last_step: history.last().map_or(f64::NAN, |r| r.step),
    })
}

fn finish(
    cfg: &TorusConfig,
    solver: &SolverConfig,
    state: ShapeState,
    history: Vec<IterationRecord>,
    contraction_ratio: f64,
) -> Result<EquilibriumSolution> {
    let (forces, rhs, residual) = evaluate_state(&state, cfg.epsilon, solver, true)?;
    let c_eps = residual.c_eps;
    let (j_sq, _) = omega_sq_and_j(&state, cfg, c_eps, rhs.mean_f, rhs.mean_weight)?;
    let (s, omega, c_flux) = reconstruct_profiles(&state, cfg, c_eps, j_sq)?;
    let last = history.last().expect("at least one iteration ran");
    Ok(EquilibriumSolution {
        torus: *cfg,
        solver: *solver,
        diagnostics: Diagnostics {
            iterations: history.len(),
            final_step: last.step,
            contraction_ratio,
            quadrature_error: forces.error_estimate.unwrap_or(f64::NAN),
            mean_f: rhs.mean_f,
            mean_weight: rhs.mean_weight,
            history,
        },
        state,
        s,
        omega,
        j_sq,
        c_flux,
        c_eps,
    })
}

/// `C(R)`, the thickness `s` and the axial rate `Ω` in physical units.
pub fn reconstruct_profiles(
    state: &ShapeState,
    cfg: &TorusConfig,
    c_eps: f64,
    j_sq: f64,
) -> Result<(PeriodicSeries, PeriodicSeries, f64)> {
    let big_r = cfg.big_r();
    let c_flux = 2.0 * cfg.omega0.powi(3) * cfg.r0 * cfg.r0 * big_r * c_eps / cfg.mu_g;
    let modes = 2 * state.modes();
    let m = 2 * modes + 1;
    let mut s = Vec::with_capacity(m);
    let mut omega = Vec::with_capacity(m);
    for t in theta_grid(m) {
        let r = cfg.r0 * state.radius_ratio(cfg.epsilon, t);
        let om = cfg.omega0 * state.rate_ratio(cfg.epsilon, t);
        let arm = big_r + r * t.cos();
        let sv = c_flux / (arm * r * om);
        if !(sv > 0.0) {
            return Err(Error::InvalidThickness { theta: t, value: sv });
        }
        s.push(sv);
        omega.push(j_sq.max(0.0).sqrt() / (arm * arm));
    }
    Ok((
        PeriodicSeries::analyze(&s, modes)?,
        PeriodicSeries::analyze(&omega, modes)?,
        c_flux,
    ))
}

/// Leading thickness `s̄ = (ω₀²r₀/(2πμG))(1 − ¾ε cos θ)`.
pub fn s_bar(cfg: &TorusConfig, modes: usize) -> PeriodicSeries {
    let scale = cfg.omega0 * cfg.omega0 * cfg.r0 / (2.0 * PI * cfg.mu_g);
    let mut s = PeriodicSeries::cos_mode(modes, 1, -0.75 * cfg.epsilon * scale);
    s.set_half_a0(scale);
    s
}

impl EquilibriumSolution {
    /// `‖ρ*‖_{W^{2,2}}`.
    pub fn rho_norm(&self) -> f64 {
        self.state.rho.sobolev_norm(2)
    }

    /// `‖w* − w̄‖_{W^{1,2}}`.
    pub fn w_deviation(&self) -> f64 {
        (&self.state.w - &w_bar(self.state.modes())).sobolev_norm(1)
    }

    /// `‖s − s̄‖_{W^{1,2}}/ε`.
    pub fn s_deviation_over_eps(&self) -> f64 {
        let sb = s_bar(&self.torus, self.s.truncation());
        (&self.s - &sb).sobolev_norm(1) / self.torus.epsilon
    }

    /// Mean axial rate `Ω̄ = ⟨Ω⟩/2π`.
    pub fn omega_mean(&self) -> f64 {
        self.omega.half_a0()
    }

    /// `Ω̄/(ε√log(1/ε))`.
    pub fn omega_log_scaled(&self) -> f64 {
        let e = self.torus.epsilon;
        self.omega_mean() / (e * (1.0 / e).ln().sqrt())
    }
}
