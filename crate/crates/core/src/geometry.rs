//! Torus parameterization, moving frames and kinematics of the stationary motion.
//!
//! The middle fiber is `X(θ, φ) = R ε₁(φ) + r(θ) ε_r(θ, φ)` with
//! `r = r₀(1 + ερ)` and rolling rate `ω = ω₀(1 + εw)`. Everything is
//! axially symmetric, so fields are evaluated at `φ = 0` unless a routine
//! takes `φ` explicitly.

use std::f64::consts::PI;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{theta_grid, Admissible, PeriodicSeries};

/// Smallest allowed `r(θ)/r₀` before the shape is declared degenerate.
pub const MIN_RADIUS_RATIO: f64 = 0.5;

/// Physical parameters of the stratum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusConfig {
    pub r0: f64,
    pub omega0: f64,
    pub mu_g: f64,
    pub epsilon: f64,
}

impl TorusConfig {
    pub fn new(r0: f64, omega0: f64, mu_g: f64, epsilon: f64) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("r0", r0)?;
        positive("omega0", omega0)?;
        positive("mu_g", mu_g)?;
        positive("epsilon", epsilon)?;
        if epsilon > 1.0 {
            return Err(Error::InvalidConfig(format!("epsilon must not exceed 1, got {epsilon}")));
        }
        Ok(Self {
            r0,
            omega0,
            mu_g,
            epsilon,
        })
    }

    /// Unit-scale configuration `r₀ = ω₀ = μG = 1`.
    pub fn unit(epsilon: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, epsilon)
    }

    /// Major radius `R = r₀/ε`.
    pub fn big_r(&self) -> f64 {
        self.r0 / self.epsilon
    }
}

/// The unknown pair `(ρ, w)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeState {
    pub rho: PeriodicSeries,
    pub w: PeriodicSeries,
}

/// `w̄ = −¼ cos θ`.
pub fn w_bar(modes: usize) -> PeriodicSeries {
    PeriodicSeries::cos_mode(modes, 1, -0.25)
}

impl ShapeState {
    pub fn new(rho: PeriodicSeries, w: PeriodicSeries) -> Self {
        Self { rho, w }
    }

    pub fn zero(modes: usize) -> Self {
        Self::new(PeriodicSeries::zeros(modes), PeriodicSeries::zeros(modes))
    }

    /// The initial iterate `(0, w̄)`.
    pub fn initial(modes: usize) -> Self {
        Self::new(PeriodicSeries::zeros(modes), w_bar(modes))
    }

    pub fn modes(&self) -> usize {
        self.rho.truncation().max(self.w.truncation())
    }

    /// `‖ρ‖_{W^{2,2}} + ‖w‖_{W^{1,2}}`.
    pub fn x_norm(&self) -> f64 {
        self.rho.sobolev_norm(2) + self.w.sobolev_norm(1)
    }

    /// Distance in the X-norm.
    pub fn x_distance(&self, other: &Self) -> f64 {
        (&self.rho - &other.rho).sobolev_norm(2) + (&self.w - &other.w).sobolev_norm(1)
    }

    /// Largest coefficient that the admissible space forbids.
    pub fn admissibility_violation(&self) -> f64 {
        self.rho
            .half_a0()
            .abs()
            .max(self.rho.cos_coeff(1).abs())
            .max(self.rho.sin_coeff(1).abs())
            .max(self.w.half_a0().abs())
    }

    pub fn projected(&self) -> Self {
        Self::new(self.rho.project(Admissible::Shape), self.w.project(Admissible::Rate))
    }

    /// `r(θ)/r₀ = 1 + ερ(θ)`.
    pub fn radius_ratio(&self, epsilon: f64, theta: f64) -> f64 {
        1.0 + epsilon * self.rho.eval(theta)
    }

    /// `ω(θ)/ω₀ = 1 + εw(θ)`.
    pub fn rate_ratio(&self, epsilon: f64, theta: f64) -> f64 {
        1.0 + epsilon * self.w.eval(theta)
    }

    /// Scans a fine grid and rejects shapes with `r < 0.5 r₀` or `ω ≤ 0`.
    pub fn check_nondegenerate(&self, epsilon: f64) -> Result<()> {
        for theta in theta_grid(8 * self.modes() + 64) {
            let ratio = self.radius_ratio(epsilon, theta);
            if !(ratio >= MIN_RADIUS_RATIO) {
                return Err(Error::DegenerateShape {
                    theta,
                    min_ratio: ratio,
                });
            }
            if !(self.rate_ratio(epsilon, theta) > 0.0) {
                return Err(Error::Precondition(format!(
                    "rolling rate vanishes at θ = {theta:.4}"
                )));
            }
        }
        Ok(())
    }
}

/// Radius and its first two θ-derivatives (physical units).
fn radius_jet(cfg: &TorusConfig, state: &ShapeState, theta: f64) -> (f64, f64, f64) {
    let e = cfg.epsilon;
    let r = cfg.r0 * (1.0 + e * state.rho.eval(theta));
    let r1 = cfg.r0 * e * state.rho.derivative(1).eval(theta);
    let r2 = cfg.r0 * e * state.rho.derivative(2).eval(theta);
    (r, r1, r2)
}

fn e1(phi: f64) -> Vector3<f64> {
    Vector3::new(phi.cos(), phi.sin(), 0.0)
}

fn e2(phi: f64) -> Vector3<f64> {
    Vector3::new(-phi.sin(), phi.cos(), 0.0)
}

fn e_r(theta: f64, phi: f64) -> Vector3<f64> {
    e1(phi) * theta.cos() + Vector3::z() * theta.sin()
}

fn e_theta(theta: f64, phi: f64) -> Vector3<f64> {
    -e1(phi) * theta.sin() + Vector3::z() * theta.cos()
}

/// `X(θ, φ) = R ε₁(φ) + r(θ) ε_r(θ, φ)`.
pub fn surface_point(cfg: &TorusConfig, state: &ShapeState, theta: f64, phi: f64) -> Vector3<f64> {
    let r = cfg.r0 * state.radius_ratio(cfg.epsilon, theta);
    e1(phi) * cfg.big_r() + e_r(theta, phi) * r
}

/// Tangent vectors `(X_θ, X_φ)`.
pub fn surface_tangents(
    cfg: &TorusConfig,
    state: &ShapeState,
    theta: f64,
    phi: f64,
) -> (Vector3<f64>, Vector3<f64>) {
    let (r, r1, _) = radius_jet(cfg, state, theta);
    let x_theta = e_r(theta, phi) * r1 + e_theta(theta, phi) * r;
    let x_phi = e2(phi) * (cfg.big_r() + r * theta.cos());
    (x_theta, x_phi)
}

/// Orthonormal vectors attached to a surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame {
    pub eps1: Vector3<f64>,
    pub eps2: Vector3<f64>,
    pub eps_r: Vector3<f64>,
    pub eps_theta: Vector3<f64>,
    pub normal: Vector3<f64>,
    pub tangent_t: Vector3<f64>,
}

pub fn local_frame(
    state: &ShapeState,
    cfg: &TorusConfig,
    theta: f64,
    phi: f64,
) -> Result<SurfaceFrame> {
    let (r, r1, _) = radius_jet(cfg, state, theta);
    if r < MIN_RADIUS_RATIO * cfg.r0 {
        return Err(Error::DegenerateShape {
            theta,
            min_ratio: r / cfg.r0,
        });
    }
    let eps_r = e_r(theta, phi);
    let eps_theta = e_theta(theta, phi);
    let len = r.hypot(r1);
    Ok(SurfaceFrame {
        eps1: e1(phi),
        eps2: e2(phi),
        eps_r,
        eps_theta,
        normal: (eps_r * r - eps_theta * r1) / len,
        tangent_t: (eps_r * r1 + eps_theta * r) / len,
    })
}

/// Velocity and acceleration at `(θ, φ = 0)` for the motion `θ̇ = ω`, `φ̇ = Ω`.
///
/// `omega_axial` is Ω(θ) in physical units. The acceleration is written in
/// cylindrical components around the symmetry axis, which keeps it exact.
pub fn kinematic_fields(
    state: &ShapeState,
    cfg: &TorusConfig,
    omega_axial: &PeriodicSeries,
    theta: f64,
) -> (Vector3<f64>, Vector3<f64>) {
    let e = cfg.epsilon;
    let (r, r1, r2) = radius_jet(cfg, state, theta);
    let om = cfg.omega0 * (1.0 + e * state.w.eval(theta));
    let om1 = cfg.omega0 * e * state.w.derivative(1).eval(theta);
    let big_omega = omega_axial.eval(theta);
    let big_omega1 = omega_axial.derivative(1).eval(theta);
    let (s, c) = theta.sin_cos();

    // cylindrical radius ϖ = R + r cos θ and height z = r sin θ, with θ-derivatives
    let varpi = cfg.big_r() + r * c;
    let varpi1 = r1 * c - r * s;
    let varpi2 = r2 * c - 2.0 * r1 * s - r * c;
    let z1 = r1 * s + r * c;
    let z2 = r2 * s + 2.0 * r1 * c - r * s;

    let velocity = Vector3::new(om * varpi1, big_omega * varpi, om * z1);
    let accel = Vector3::new(
        om * (varpi2 * om + varpi1 * om1) - varpi * big_omega * big_omega,
        varpi * big_omega1 * om + 2.0 * varpi1 * om * big_omega,
        om * (z2 * om + z1 * om1),
    );
    (velocity, accel)
}

/// Exact `aʳ/ω` and `a^θ/ω` in units of `ω₀r₀`.
///
/// ```text
/// aʳ/ω  = −1 + ε(ρ'' − ρ − w) + ε²(ρ''w − ρw + ρ'w')
/// a^θ/ω = ε(2ρ' + w') + ε²(2ρ'w + ρw')
/// ```
pub fn acceleration_over_omega(
    state: &ShapeState,
    cfg: &TorusConfig,
) -> (PeriodicSeries, PeriodicSeries) {
    let e = cfg.epsilon;
    let (rho, w) = (&state.rho, &state.w);
    let (rho1, rho2, w1) = (rho.derivative(1), rho.derivative(2), w.derivative(1));
    let lin_r = &(&rho2 - rho) - w;
    let quad_r = &(&rho2.product(w) - &rho.product(w)) + &rho1.product(&w1);
    let mut ar = lin_r.axpby(e, &quad_r, e * e);
    ar.set_half_a0(ar.half_a0() - 1.0);
    let lin_t = rho1.axpby(2.0, &w1, 1.0);
    let quad_t = rho1.product(w).axpby(2.0, &rho.product(&w1), 1.0);
    let at = lin_t.axpby(e, &quad_t, e * e);
    (ar, at)
}

/// Normal thickness `δ = s r/√(r'² + r²)` and section measure
/// `|S_θ| = 2π(R + r cos θ)δ`, both in physical units.
pub fn flux_quantities(
    state: &ShapeState,
    cfg: &TorusConfig,
    s: &PeriodicSeries,
) -> Result<(PeriodicSeries, PeriodicSeries)> {
    let modes = 2 * s.truncation().max(state.modes());
    let grid = theta_grid(2 * modes + 1);
    let mut delta = Vec::with_capacity(grid.len());
    let mut area = Vec::with_capacity(grid.len());
    for &theta in &grid {
        let sv = s.eval(theta);
        if !(sv > 0.0) {
            return Err(Error::InvalidThickness { theta, value: sv });
        }
        let (r, r1, _) = radius_jet(cfg, state, theta);
        let d = sv * r / r.hypot(r1);
        delta.push(d);
        area.push(2.0 * PI * (cfg.big_r() + r * theta.cos()) * d);
    }
    Ok((
        PeriodicSeries::analyze(&delta, modes)?,
        PeriodicSeries::analyze(&area, modes)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn admissible_state(modes: usize, amp: f64) -> impl Strategy<Value = ShapeState> {
        let coeffs = proptest::collection::vec(-1.0..1.0f64, 4 * modes);
        coeffs.prop_map(move |v| {
            let mut rho = PeriodicSeries::zeros(modes);
            let mut w = PeriodicSeries::zeros(modes);
            for n in 1..=modes {
                let decay = amp / (n * n) as f64;
                if n >= 2 {
                    rho.set_mode(n, decay * v[4 * (n - 1)], decay * v[4 * (n - 1) + 1]);
                }
                w.set_mode(n, decay * v[4 * (n - 1) + 2], decay * v[4 * (n - 1) + 3]);
            }
            ShapeState::new(rho, w)
        })
    }

    #[test]
    fn surface_point_examples() {
        let cfg = TorusConfig::unit(0.1).unwrap();
        let zero = ShapeState::zero(4);
        let p = surface_point(&cfg, &zero, 0.0, 0.0);
        assert_abs_diff_eq!(p, Vector3::new(11.0, 0.0, 0.0), epsilon = 1e-13);
        let p = surface_point(&cfg, &zero, PI / 2.0, 0.0);
        assert_abs_diff_eq!(p, Vector3::new(10.0, 0.0, 1.0), epsilon = 1e-13);
        let bumped = ShapeState::new(PeriodicSeries::cos_mode(4, 2, 0.1), PeriodicSeries::zeros(4));
        let p = surface_point(&cfg, &bumped, 0.0, 0.0);
        assert_abs_diff_eq!(p, Vector3::new(10.0 + 1.01, 0.0, 0.0), epsilon = 1e-13);
    }

    #[test]
    fn frame_examples() {
        let cfg = TorusConfig::unit(0.1).unwrap();
        let zero = ShapeState::zero(4);
        let f = local_frame(&zero, &cfg, 0.7, 0.3).unwrap();
        assert_abs_diff_eq!(f.tangent_t, f.eps_theta, epsilon = 1e-15);
        assert_abs_diff_eq!(f.normal, f.eps_r, epsilon = 1e-15);
        let f = local_frame(&zero, &cfg, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(f.eps_r, Vector3::x(), epsilon = 1e-15);
        assert_abs_diff_eq!(f.eps_theta, Vector3::z(), epsilon = 1e-15);
        assert_abs_diff_eq!(f.eps2, Vector3::y(), epsilon = 1e-15);
    }

    #[test]
    fn frame_rejects_collapsed_radius() {
        let cfg = TorusConfig::unit(0.5).unwrap();
        let state = ShapeState::new(PeriodicSeries::cos_mode(4, 2, 1.5), PeriodicSeries::zeros(4));
        let err = local_frame(&state, &cfg, PI / 2.0, 0.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateShape { .. }));
        assert!(state.check_nondegenerate(0.5).is_err());
    }

    #[test]
    fn kinematics_of_uniform_rolling() {
        let cfg = TorusConfig::new(2.0, 3.0, 1.0, 0.1).unwrap();
        let zero = ShapeState::zero(4);
        for theta in theta_grid(7) {
            let f = local_frame(&zero, &cfg, theta, 0.0).unwrap();
            let (v, a) = kinematic_fields(&zero, &cfg, &PeriodicSeries::zeros(4), theta);
            assert_abs_diff_eq!(v, f.eps_theta * 6.0, epsilon = 1e-12);
            assert_abs_diff_eq!(a, -f.eps_r * 18.0, epsilon = 1e-12);
            // constant Ω leaves only the Coriolis term 2(r cos θ)'ωΩ along ε₂
            let (_, a) = kinematic_fields(&zero, &cfg, &PeriodicSeries::constant(0.4, 4), theta);
            assert_abs_diff_eq!(a.dot(&f.eps2), -2.0 * 2.0 * theta.sin() * 3.0 * 0.4, epsilon = 1e-12);
        }
    }

    #[test]
    fn acceleration_matches_trajectory_differences() {
        // integrate θ̇ = ω(θ), φ̇ = Ω(θ) with RK4 and difference the velocity
        let cfg = TorusConfig::new(1.3, 0.9, 1.0, 0.2).unwrap();
        let mut rho = PeriodicSeries::cos_mode(4, 2, 0.3);
        rho.set_mode(3, 0.0, -0.2);
        let w = &PeriodicSeries::sin_mode(4, 1, 0.4) + &PeriodicSeries::cos_mode(4, 2, 0.1);
        let state = ShapeState::new(rho, w);
        let mut big_omega = PeriodicSeries::cos_mode(4, 1, 0.05);
        big_omega.set_half_a0(0.3);

        let rate = |th: f64| (cfg.omega0 * state.rate_ratio(cfg.epsilon, th), big_omega.eval(th));
        let velocity_at = |th: f64, ph: f64| {
            let (v, _) = kinematic_fields(&state, &cfg, &big_omega, th);
            let (c, s) = (ph.cos(), ph.sin());
            Vector3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z)
        };
        let step = |th: f64, ph: f64, h: f64| {
            let k1 = rate(th);
            let k2 = rate(th + 0.5 * h * k1.0);
            let k3 = rate(th + 0.5 * h * k2.0);
            let k4 = rate(th + h * k3.0);
            (
                th + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                ph + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            )
        };
        let h = 1e-4;
        for theta in [0.0, 0.9, 2.5, -1.7] {
            let fwd = step(theta, 0.0, h);
            let bwd = step(theta, 0.0, -h);
            let fd = (velocity_at(fwd.0, fwd.1) - velocity_at(bwd.0, bwd.1)) / (2.0 * h);
            let (_, a) = kinematic_fields(&state, &cfg, &big_omega, theta);
            assert_abs_diff_eq!(fd, a, epsilon = 1e-6);
        }
    }

    #[test]
    fn acceleration_over_omega_examples() {
        let cfg = TorusConfig::unit(0.01).unwrap();
        let (ar, at) = acceleration_over_omega(&ShapeState::zero(4), &cfg);
        assert_eq!(ar.half_a0(), -1.0);
        assert_eq!(ar.sobolev_norm(0), 1.0);
        assert_eq!(at.sobolev_norm(0), 0.0);

        let (ar, _) = acceleration_over_omega(&ShapeState::initial(4), &cfg);
        for theta in theta_grid(9) {
            let expected = -1.0 + 0.01 * 0.25 * theta.cos();
            assert_abs_diff_eq!(ar.eval(theta), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn acceleration_over_omega_agrees_with_vector_kinematics() {
        let cfg = TorusConfig::new(1.5, 2.0, 1.0, 0.15).unwrap();
        let state = ShapeState::new(
            &PeriodicSeries::cos_mode(5, 2, 0.4) + &PeriodicSeries::sin_mode(5, 4, -0.2),
            &PeriodicSeries::sin_mode(5, 1, 0.3) + &PeriodicSeries::cos_mode(5, 3, 0.2),
        );
        let (ar, at) = acceleration_over_omega(&state, &cfg);
        let zero = PeriodicSeries::zeros(1);
        for theta in theta_grid(11) {
            let f = local_frame(&state, &cfg, theta, 0.0).unwrap();
            let (_, a) = kinematic_fields(&state, &cfg, &zero, theta);
            let om = cfg.omega0 * state.rate_ratio(cfg.epsilon, theta);
            let scale = cfg.omega0 * cfg.r0 * om;
            // the axial part carries the −ϖΩ² term, absent here since Ω = 0
            assert_abs_diff_eq!(a.dot(&f.eps_r) / scale, ar.eval(theta), epsilon = 1e-12);
            assert_abs_diff_eq!(a.dot(&f.eps_theta) / scale, at.eval(theta), epsilon = 1e-12);
        }
    }

    #[test]
    fn flux_examples() {
        let cfg = TorusConfig::new(2.0, 1.0, 1.0, 0.1).unwrap();
        let zero = ShapeState::zero(4);
        let s0 = PeriodicSeries::constant(0.3, 4);
        let (delta, area) = flux_quantities(&zero, &cfg, &s0).unwrap();
        for theta in theta_grid(9) {
            assert_abs_diff_eq!(delta.eval(theta), 0.3, epsilon = 1e-13);
            let expected = 2.0 * PI * (20.0 + 2.0 * theta.cos()) * 0.3;
            assert_abs_diff_eq!(area.eval(theta), expected, epsilon = 1e-12);
        }
        let bad = PeriodicSeries::cos_mode(4, 1, 1.0);
        assert!(matches!(
            flux_quantities(&zero, &cfg, &bad),
            Err(Error::InvalidThickness { .. })
        ));
    }

    #[test]
    fn continuity_constant_from_thickness() {
        // s = C/((R + r cos θ) r ω) makes the flux through every section equal
        let cfg = TorusConfig::new(1.0, 1.0, 1.0, 0.1).unwrap();
        let state = ShapeState::new(PeriodicSeries::cos_mode(6, 2, 0.2), w_bar(6));
        let big_c = 0.7;
        let s = PeriodicSeries::from_fn(129, 64, |t| {
            let r = cfg.r0 * state.radius_ratio(cfg.epsilon, t);
            let om = cfg.omega0 * state.rate_ratio(cfg.epsilon, t);
            big_c / ((cfg.big_r() + r * t.cos()) * r * om)
        })
        .unwrap();
        for t in theta_grid(13) {
            let r = cfg.r0 * state.radius_ratio(cfg.epsilon, t);
            let om = cfg.omega0 * state.rate_ratio(cfg.epsilon, t);
            assert_abs_diff_eq!((cfg.big_r() + r * t.cos()) * s.eval(t) * r * om, big_c, epsilon = 1e-10);
        }
    }

    proptest! {
        #[test]
        fn tangents_orthogonal(state in admissible_state(6, 0.5), th in -PI..PI, ph in -PI..PI) {
            let cfg = TorusConfig::unit(0.1).unwrap();
            let (xt, xp) = surface_tangents(&cfg, &state, th, ph);
            prop_assert!(xt.dot(&xp).abs() <= 1e-13 * xt.norm() * xp.norm());
        }

        #[test]
        fn frame_orthonormal(state in admissible_state(6, 0.5), th in -PI..PI, ph in -PI..PI) {
            let cfg = TorusConfig::unit(0.1).unwrap();
            let f = local_frame(&state, &cfg, th, ph).unwrap();
            for v in [f.eps1, f.eps2, f.eps_r, f.eps_theta, f.normal, f.tangent_t] {
                prop_assert!((v.norm() - 1.0).abs() < 1e-14);
            }
            prop_assert!(f.eps_r.dot(&f.eps_theta).abs() < 1e-14);
            prop_assert!(f.normal.dot(&f.tangent_t).abs() < 1e-14);
            prop_assert!((f.normal.cross(&f.eps2) - f.tangent_t).norm() < 1e-14);
            let (xt, xp) = surface_tangents(&cfg, &state, th, ph);
            let n = xp.cross(&xt).normalize();
            prop_assert!((n - f.normal).norm() < 1e-13);
        }

        #[test]
        fn power_identity_of_accelerations(state in admissible_state(8, 1.0), e in 0.01..0.2f64) {
            let cfg = TorusConfig::unit(e).unwrap();
            let (ar, at) = acceleration_over_omega(&state, &cfg);
            let r = {
                let mut r = &state.rho * e;
                r.set_half_a0(1.0);
                r
            };
            let mut om = &state.w * e;
            om.set_half_a0(1.0);
            // aʳ = ω·(aʳ/ω), so the bracket carries one more factor of ω
            let power = &r.derivative(1).product(&ar) + &r.product(&at);
            let bracket = om.product(&power).bracket_mean();
            let scale = 1.0 + state.x_norm();
            prop_assert!(bracket.abs() <= 1e-12 * scale);
        }

        #[test]
        fn axial_velocity_derivative_has_zero_mean(state in admissible_state(6, 0.5)) {
            let cfg = TorusConfig::unit(0.1).unwrap();
            let zero = PeriodicSeries::zeros(1);
            let m = 4 * 6 + 1;
            let samples: Vec<f64> = theta_grid(m)
                .into_iter()
                .map(|t| kinematic_fields(&state, &cfg, &zero, t).0.x)
                .collect();
            let v1 = PeriodicSeries::analyze(&samples, 12).unwrap();
            prop_assert!(v1.derivative(1).bracket_mean().abs() < 1e-14);
        }
    }
}
