//! Checks of converged motions that do not reuse the solver's force path.
//!
//! The attraction is recomputed from raw surface points `X(α, β) − X(θ, 0)`
//! with polar coordinates centred on the singular point: each ray is paired
//! with its opposite so the principal value becomes an ordinary integral.
//! Both sides of the reduced system are then formed in physical units on a
//! grid finer than the solver's.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{local_frame, surface_point, w_bar, ShapeState, TorusConfig};
use crate::solver::{s_bar, EquilibriumSolution};
use crate::spectra::{bracket_of_samples, theta_grid};

/// Tolerance for brackets that vanish exactly on trigonometric polynomials.
pub const SPECTRAL_TOL: f64 = 1e-11;
/// Relative tolerance for identities that involve the attraction integrals.
pub const FORCE_IDENTITY_TOL: f64 = 1e-7;
/// Spread allowed in `(R + r cos θ)²Ω`.
pub const FIRST_INTEGRAL_TOL: f64 = 1e-12;
/// The converged residual must be at most this fraction of the initial one.
pub const RESIDUAL_FRACTION: f64 = 0.1;
/// Largest allowed max/min ratio of `Ω̄/(ε√log(1/ε))` across a sweep.
pub const OMEGA_RATIO_BOUND: f64 = 3.0;

/// Polar layout around the singular point in the `(α − θ, β/ε)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarScheme {
    /// Gauss nodes per angular panel.
    pub angular_order: usize,
    /// Gauss nodes per radial panel.
    pub radial_order: usize,
    /// Length of the first radial panel; later panels double.
    pub first_radius: f64,
}

impl Default for PolarScheme {
    fn default() -> Self {
        Self {
            angular_order: 8,
            radial_order: 8,
            first_radius: 0.25,
        }
    }
}

impl PolarScheme {
    pub fn refined(&self) -> Self {
        Self {
            angular_order: 2 * self.angular_order,
            radial_order: 2 * self.radial_order,
            ..*self
        }
    }

    /// Half the orders, at least 2; the reference level for refinement checks.
    pub fn coarsened(&self) -> Self {
        Self {
            angular_order: (self.angular_order / 2).max(2),
            radial_order: (self.radial_order / 2).max(2),
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.angular_order < 2 || self.radial_order < 2 || !(self.first_radius > 0.0) {
            return Err(Error::InvalidConfig(format!("bad polar scheme {self:?}")));
        }
        Ok(())
    }
}

fn gauss(n: usize, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("order checked"));
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    gl.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect()
}

struct Ray {
    cos: f64,
    sin: f64,
    weight: f64,
    radial: Vec<(f64, f64)>,
}

/// Rays over the half turn `φ ∈ [0, π)` of the rectangle `|a| ≤ π`, `|η| ≤ π/ε`.
fn polar_rays(scheme: &PolarScheme, eps: f64) -> Vec<Ray> {
    let (half_a, half_eta) = (PI, PI / eps);
    let u_corner = (half_a / half_eta).atan();
    // angles measured from the η axis, graded toward the corner direction
    let mut panels = Vec::new();
    let mut lo = u_corner;
    while lo < 0.5 * PI {
        let hi = (2.0 * lo).min(0.5 * PI);
        panels.push((lo, hi));
        lo = hi;
    }
    let mut angles: Vec<(f64, f64)> = Vec::new();
    for &(lo, hi) in &panels {
        for (u, w) in gauss(scheme.angular_order, lo, hi) {
            angles.push((0.5 * PI - u, w));
            angles.push((0.5 * PI + u, w));
        }
    }
    for k in 0..4 {
        let (lo, hi) = (-u_corner + 0.5 * k as f64 * u_corner, -u_corner + 0.5 * (k + 1) as f64 * u_corner);
        for (u, w) in gauss(scheme.angular_order, lo, hi) {
            angles.push((0.5 * PI + u, w));
        }
    }
    angles
        .into_iter()
        .map(|(phi, weight)| {
            let (sin, cos) = phi.sin_cos();
            let t_max = if cos.abs() * half_eta > sin * half_a {
                half_a / cos.abs()
            } else {
                half_eta / sin
            };
            let mut radial = Vec::new();
            let (mut lo, mut hi) = (0.0, scheme.first_radius.min(t_max));
            loop {
                radial.extend(gauss(scheme.radial_order, lo, hi));
                if hi >= t_max {
                    break;
                }
                lo = hi;
                hi = if 2.0 * hi >= t_max / 1.5 { t_max } else { 2.0 * hi };
            }
            Ray {
                cos,
                sin,
                weight,
                radial,
            }
        })
        .collect()
}

/// `∫∫ (1/ω(α)) (X(α, β) − X(θ, 0))·e/|X(α, β) − X(θ, 0)|³ dα dβ` for `e = ε_r, ε_θ`.
///
/// The base point sits at azimuth `phi`; by axial symmetry the result does not
/// depend on it.
fn raw_attraction(state: &ShapeState, cfg: &TorusConfig, rays: &[Ray], theta: f64, phi: f64) -> Result<(f64, f64)> {
    let eps = cfg.epsilon;
    let p = surface_point(cfg, state, theta, phi);
    let frame = local_frame(state, cfg, theta, phi)?;
    let (mut ir, mut it) = (0.0, 0.0);
    for ray in rays {
        let (mut sr, mut st) = (0.0, 0.0);
        for &(t, w) in &ray.radial {
            for sign in [1.0, -1.0] {
                let alpha = theta + sign * t * ray.cos;
                let beta = phi + eps * sign * t * ray.sin;
                let d = surface_point(cfg, state, alpha, beta) - p;
                let inv = 1.0 / (d.norm_squared().powf(1.5) * cfg.omega0 * state.rate_ratio(eps, alpha));
                sr += w * t * d.dot(&frame.eps_r) * inv;
                st += w * t * d.dot(&frame.eps_theta) * inv;
            }
        }
        ir += ray.weight * sr;
        it += ray.weight * st;
    }
    Ok((eps * ir, eps * it))
}

/// Both sides of the reduced system on a grid, in units of `ω₀r₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceBalance {
    pub grid: Vec<f64>,
    /// `aʳ/ω = (r'' − r)ω + r'ω'`
    pub lhs_r: Vec<f64>,
    /// `a^θ/ω = 2r'ω + rω'`
    pub lhs_theta: Vec<f64>,
    pub rhs_r: Vec<f64>,
    pub rhs_theta: Vec<f64>,
    /// `GμC` fixed by the mean of the radial line.
    pub gmu_c: f64,
    /// `max |lhs − rhs|/ε` over both lines.
    pub scaled_residual: f64,
}

struct Profile {
    r: f64,
    r1: f64,
    r2: f64,
    om: f64,
    om1: f64,
}

fn profile(state: &ShapeState, cfg: &TorusConfig, theta: f64) -> Profile {
    let e = cfg.epsilon;
    Profile {
        r: cfg.r0 * (1.0 + e * state.rho.eval(theta)),
        r1: cfg.r0 * e * state.rho.derivative(1).eval(theta),
        r2: cfg.r0 * e * state.rho.derivative(2).eval(theta),
        om: cfg.omega0 * (1.0 + e * state.w.eval(theta)),
        om1: cfg.omega0 * e * state.w.derivative(1).eval(theta),
    }
}

/// Evaluates the reduced system for `state` with independently computed forces.
pub fn force_balance(
    state: &ShapeState,
    cfg: &TorusConfig,
    scheme: &PolarScheme,
    grid_size: usize,
) -> Result<ForceBalance> {
    scheme.validate()?;
    state.check_nondegenerate(cfg.epsilon)?;
    let grid = theta_grid(grid_size);
    let rays = polar_rays(scheme, cfg.epsilon);
    let raw: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&t| raw_attraction(state, cfg, &rays, t, 0.0))
        .collect::<Result<_>>()?;

    let profiles: Vec<Profile> = grid.iter().map(|&t| profile(state, cfg, t)).collect();
    let big_r = cfg.big_r();
    let mut fr = Vec::with_capacity(grid.len());
    let mut ft = Vec::with_capacity(grid.len());
    let mut f_axis = Vec::with_capacity(grid.len());
    let mut inertia = Vec::with_capacity(grid.len());
    for ((&t, &(ir, it)), p) in grid.iter().zip(&raw).zip(&profiles) {
        fr.push(ir / p.om);
        ft.push(it / p.om);
        f_axis.push((ir * t.cos() - it * t.sin()) / p.om);
        inertia.push(1.0 / (p.om * (big_r + p.r * t.cos()).powi(3)));
    }
    let ratio = bracket_of_samples(&f_axis) / bracket_of_samples(&inertia);
    // right-hand sides per unit GμC
    let mut unit_r = Vec::with_capacity(grid.len());
    let mut unit_t = Vec::with_capacity(grid.len());
    let mut lhs_r = Vec::with_capacity(grid.len());
    let mut lhs_theta = Vec::with_capacity(grid.len());
    for (j, (&t, p)) in grid.iter().zip(&profiles).enumerate() {
        unit_r.push(-t.cos() * inertia[j] * ratio + fr[j]);
        unit_t.push(t.sin() * inertia[j] * ratio + ft[j]);
        lhs_r.push((p.r2 - p.r) * p.om + p.r1 * p.om1);
        lhs_theta.push(2.0 * p.r1 * p.om + p.r * p.om1);
    }
    let gmu_c = bracket_of_samples(&lhs_r) / bracket_of_samples(&unit_r);
    let rhs_r: Vec<f64> = unit_r.iter().map(|v| gmu_c * v).collect();
    let rhs_theta: Vec<f64> = unit_t.iter().map(|v| gmu_c * v).collect();
    let scale = cfg.omega0 * cfg.r0 * cfg.epsilon;
    let scaled_residual = lhs_r
        .iter()
        .zip(&rhs_r)
        .chain(lhs_theta.iter().zip(&rhs_theta))
        .fold(0.0f64, |m, (l, r)| m.max((l - r).abs()))
        / scale;
    Ok(ForceBalance {
        grid,
        lhs_r,
        lhs_theta,
        rhs_r,
        rhs_theta,
        gmu_c,
        scaled_residual,
    })
}

/// `⟨r'aʳ + r a^θ⟩` with physical accelerations, and the bracket of the absolute
/// values as its scale. Exact for any state when the grid has more than `4N` points.
pub fn kinematic_power_bracket(state: &ShapeState, cfg: &TorusConfig, grid_size: usize) -> (f64, f64) {
    let mut vals = Vec::with_capacity(grid_size);
    let mut mags = Vec::with_capacity(grid_size);
    for t in theta_grid(grid_size) {
        let p = profile(state, cfg, t);
        let ar = p.om * ((p.r2 - p.r) * p.om + p.r1 * p.om1);
        let at = p.om * (2.0 * p.r1 * p.om + p.r * p.om1);
        vals.push(p.r1 * ar + p.r * at);
        mags.push((p.r1 * ar).abs() + (p.r * at).abs());
    }
    (bracket_of_samples(&vals), bracket_of_samples(&mags))
}

/// Moment and power brackets of one side of the system, each divided by
/// `⟨|u| + |v|⟩` (or its weighted analogue for the power bracket).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Brackets {
    pub cos: f64,
    pub sin: f64,
    pub power: f64,
}

fn brackets(grid: &[f64], u: &[f64], v: &[f64], state: &ShapeState, cfg: &TorusConfig) -> Brackets {
    let mut c = Vec::with_capacity(grid.len());
    let mut s = Vec::with_capacity(grid.len());
    let mut pw = Vec::with_capacity(grid.len());
    let mut mag = Vec::with_capacity(grid.len());
    let mut pmag = Vec::with_capacity(grid.len());
    for (j, &t) in grid.iter().enumerate() {
        let (sn, cs) = t.sin_cos();
        let p = profile(state, cfg, t);
        c.push(u[j] * cs - v[j] * sn);
        s.push(u[j] * sn + v[j] * cs);
        pw.push(p.om * (p.r1 * u[j] + p.r * v[j]));
        mag.push(u[j].abs() + v[j].abs());
        pmag.push(p.om * ((p.r1 * u[j]).abs() + (p.r * v[j]).abs()));
    }
    let scale = bracket_of_samples(&mag);
    Brackets {
        cos: (bracket_of_samples(&c) / scale).abs(),
        sin: (bracket_of_samples(&s) / scale).abs(),
        power: (bracket_of_samples(&pw) / bracket_of_samples(&pmag)).abs(),
    }
}

impl ForceBalance {
    pub fn kinematic_brackets(&self, state: &ShapeState, cfg: &TorusConfig) -> Brackets {
        brackets(&self.grid, &self.lhs_r, &self.lhs_theta, state, cfg)
    }

    pub fn force_brackets(&self, state: &ShapeState, cfg: &TorusConfig) -> Brackets {
        brackets(&self.grid, &self.rhs_r, &self.rhs_theta, state, cfg)
    }
}

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub epsilon: Option<f64>,
    pub modes: Option<usize>,
    pub fine_grid: Option<usize>,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    /// Records `value ≤ tolerance`. Names must be unique.
    pub fn push(&mut self, name: &str, value: f64, tolerance: f64) {
        assert!(self.get(name).is_none(), "duplicate check {name}");
        self.checks.push(Check {
            name: name.to_string(),
            value,
            tolerance,
            pass: value <= tolerance,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Options for [`validate_solution`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationOptions {
    pub scheme: PolarScheme,
    /// Grid for the fine evaluation; `None` means `4N + 1`.
    pub fine_grid: Option<usize>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            scheme: PolarScheme::default(),
            fine_grid: None,
        }
    }
}

/// Runs the identity, first-integral and force-balance checks on a solution.
pub fn validate_solution(sol: &EquilibriumSolution, opts: &ValidationOptions) -> Result<ValidationReport> {
    let cfg = &sol.torus;
    let state = &sol.state;
    let modes = state.modes();
    let grid = opts.fine_grid.unwrap_or(4 * modes + 1);
    if grid < 4 * modes + 1 {
        return Err(Error::UnderResolved {
            samples: grid,
            modes: 2 * modes,
        });
    }
    let mut report = ValidationReport {
        epsilon: Some(cfg.epsilon),
        modes: Some(modes),
        fine_grid: Some(grid),
        checks: Vec::new(),
    };

    let coarse = force_balance(state, cfg, &opts.scheme.coarsened(), grid)?;
    let fine = force_balance(state, cfg, &opts.scheme, grid)?;
    let initial = force_balance(&ShapeState::initial(modes), cfg, &opts.scheme, grid)?;

    let kin = fine.kinematic_brackets(state, cfg);
    report.push("kinematic_bracket_cos", kin.cos, SPECTRAL_TOL);
    report.push("kinematic_bracket_sin", kin.sin, SPECTRAL_TOL);
    let (kp, kscale) = kinematic_power_bracket(state, cfg, grid);
    report.push("kinematic_power", (kp / kscale).abs(), SPECTRAL_TOL);

    let frc = fine.force_brackets(state, cfg);
    report.push("force_bracket_cos", frc.cos, FORCE_IDENTITY_TOL);
    report.push("force_bracket_sin", frc.sin, FORCE_IDENTITY_TOL);
    report.push("power_bracket", frc.power, FORCE_IDENTITY_TOL);

    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in theta_grid(grid) {
        let arm = cfg.big_r() + cfg.r0 * state.radius_ratio(cfg.epsilon, t) * t.cos();
        let j = arm * arm * sol.omega.eval(t);
        lo = lo.min(j);
        hi = hi.max(j);
    }
    report.push("first_integral", (hi - lo) / hi.abs(), FIRST_INTEGRAL_TOL);

    let gmu_c = cfg.mu_g * sol.c_flux;
    report.push("flux_constant", (fine.gmu_c / gmu_c - 1.0).abs(), FORCE_IDENTITY_TOL);

    report.push(
        "force_balance",
        fine.scaled_residual,
        RESIDUAL_FRACTION * initial.scaled_residual,
    );
    report.push("force_balance_refinement", fine.scaled_residual, coarse.scaled_residual);
    Ok(report)
}

/// Trend checks over solutions at several ε.
pub fn check_asymptotics(solutions: &[EquilibriumSolution]) -> Result<ValidationReport> {
    if solutions.len() < 3 {
        return Err(Error::InsufficientSweep {
            needed: 3,
            got: solutions.len(),
        });
    }
    let mut sorted: Vec<&EquilibriumSolution> = solutions.iter().collect();
    sorted.sort_by(|a, b| b.torus.epsilon.total_cmp(&a.torus.epsilon));

    // largest ratio of consecutive values, ordered by decreasing ε
    let worst_ratio = |f: &dyn Fn(&EquilibriumSolution) -> f64| {
        sorted
            .windows(2)
            .map(|w| f(w[1]) / f(w[0]))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut report = ValidationReport::default();
    let rho = worst_ratio(&|s| s.rho_norm());
    let w = worst_ratio(&|s| s.w_deviation());
    let sdev = worst_ratio(&|s| s.s_deviation_over_eps());
    // strict decrease is `ratio < 1`; the report stores `ratio ≤ 1 − ulp`
    report.push("rho_norm_decreasing", rho, 1.0 - f64::EPSILON);
    report.push("w_deviation_decreasing", w, 1.0 - f64::EPSILON);
    report.push("s_deviation_decreasing", sdev, 1.0);

    let omega: Vec<f64> = sorted.iter().map(|s| s.omega_log_scaled()).collect();
    let (mn, mx) = omega.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    report.push("omega_log_ratio", mx / mn, OMEGA_RATIO_BOUND);
    Ok(report)
}

/// `‖s − s̄‖_{W^{1,2}}/ε` recomputed from samples of the continuity relation.
pub fn thickness_deviation(sol: &EquilibriumSolution, grid_size: usize) -> Result<f64> {
    let cfg = &sol.torus;
    let modes = (grid_size - 1) / 2;
    let samples: Vec<f64> = theta_grid(grid_size)
        .into_iter()
        .map(|t| {
            let p = profile(&sol.state, cfg, t);
            sol.c_flux / ((cfg.big_r() + p.r * t.cos()) * p.r * p.om)
        })
        .collect();
    let s = crate::spectra::PeriodicSeries::analyze(&samples, modes)?;
    Ok((&s - &s_bar(cfg, modes)).sobolev_norm(1) / cfg.epsilon)
}

/// `‖w − w̄‖_{W^{1,2}}`, independent of the solver's accessor.
pub fn rate_deviation(state: &ShapeState) -> f64 {
    (&state.w - &w_bar(state.modes())).sobolev_norm(1)
}
