//! Newtonian self-attraction of the stratum.
//!
//! Lengths are scaled by `R`, and the integration variables are `a = α − θ`
//! and `η = β/ε`. With `Z_β = z(εη)/ε²` and `D̃ = D/ε` the integrals below are
//! absolutely convergent once `a` is paired with `−a`: each paired integrand
//! is at most `O(1/dist)` near the corner `(a, η) = (0, 0)`.
//!
//! Forces are reported in units of `ω₀r₀·εc(ε)`, where
//! `c(ε) = GμC(R)/(2ω₀³r₀²R)`, so no quadrature depends on the flux constant.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ShapeState;
use crate::quadrature::{QuadratureLayout, QuadratureScheme};
use crate::spectra::{bracket_of_samples, theta_grid, PeriodicSeries};

/// `z(t) = 2(1 − cos t)`, evaluated as `4 sin²(t/2)` to avoid cancellation.
pub fn chord(t: f64) -> f64 {
    let s = (0.5 * t).sin();
    4.0 * s * s
}

/// `Nʳ` and `N^θ`: components of `(X(α,β) − X(θ,0))/R` along `ε_r(θ,0)` and `ε_θ(θ,0)`.
pub fn numerators(state: &ShapeState, eps: f64, alpha: f64, beta: f64, theta: f64) -> (f64, f64) {
    let (rho_a, rho_t) = (state.rho.eval(alpha), state.rho.eval(theta));
    let varrho_a = 1.0 + eps * rho_a;
    let p_a = 1.0 + eps * varrho_a * alpha.cos();
    let (zb, za) = (chord(beta), chord(alpha - theta));
    let nr = -zb * theta.cos() * p_a - eps * za * varrho_a + 2.0 * eps * eps * (rho_a - rho_t);
    let nt = zb * theta.sin() * p_a + 2.0 * eps * (alpha - theta).sin() * varrho_a;
    (0.5 * nr, 0.5 * nt)
}

/// Squared distance `D² = |X(α,β) − X(θ,0)|²/R²` split as `D₀²(1 + d)` with
/// `D₀² = z(β) + ε²z(α − θ)`.
pub fn denominator_split(
    state: &ShapeState,
    eps: f64,
    alpha: f64,
    beta: f64,
    theta: f64,
) -> Result<(f64, f64)> {
    let (rho_a, rho_t) = (state.rho.eval(alpha), state.rho.eval(theta));
    let (va, vt) = (1.0 + eps * rho_a, 1.0 + eps * rho_t);
    let (pa, pt) = (1.0 + eps * va * alpha.cos(), 1.0 + eps * vt * theta.cos());
    let (zb, za) = (chord(beta), chord(alpha - theta));
    let d0_sq = zb + eps * eps * za;
    if d0_sq == 0.0 {
        return Err(Error::SingularPoint);
    }
    let diff = eps * eps * (rho_a - rho_t);
    let d_sq = zb * pa * pt + eps * eps * za * va * vt + diff * diff;
    Ok((d0_sq, d_sq / d0_sq - 1.0))
}

/// Values of the four leading kernels at one point (unscaled variables).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub k1r: f64,
    pub k2: f64,
    pub k3: f64,
    pub k1: f64,
}

pub fn kernel_sample(
    state: &ShapeState,
    eps: f64,
    alpha: f64,
    beta: f64,
    theta: f64,
) -> Result<KernelSample> {
    let (zb, za) = (chord(beta), chord(alpha - theta));
    let d0_sq = zb + eps * eps * za;
    if d0_sq == 0.0 {
        return Err(Error::SingularPoint);
    }
    let inv = 1.0 / (d0_sq * d0_sq.sqrt());
    let e2 = eps * eps;
    Ok(KernelSample {
        k1r: 2.0 * e2 * (state.rho.eval(alpha) - state.rho.eval(theta)) * inv,
        k2: -e2 * za * inv,
        k3: zb * inv,
        k1: 2.0 * e2 * (alpha - theta).sin() * inv,
    })
}

/// `σ(α, β, θ)`: the first-order density that multiplies `K₁` and `K₂` in the
/// linearized force.
pub fn sigma_field(state: &ShapeState, eps: f64, alpha: f64, beta: f64, theta: f64) -> Result<f64> {
    let (zb, za) = (chord(beta), chord(alpha - theta));
    let d0_sq = zb + eps * eps * za;
    if d0_sq == 0.0 {
        return Err(Error::SingularPoint);
    }
    let (ra, rt) = (state.rho.eval(alpha), state.rho.eval(theta));
    Ok(ra - state.w.eval(alpha)
        - 1.5 * (zb / d0_sq * (alpha.cos() + theta.cos()) + eps * eps * za / d0_sq * (ra + rt)))
}

/// The linear integral operators and their weighted variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    K1r,
    K1,
    K2,
    K3,
    K1Tilde,
    K1Hat,
    K2Tilde,
    K2Hat,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 8] = [
        OperatorKind::K1r,
        OperatorKind::K1,
        OperatorKind::K2,
        OperatorKind::K3,
        OperatorKind::K1Tilde,
        OperatorKind::K1Hat,
        OperatorKind::K2Tilde,
        OperatorKind::K2Hat,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::K1r => "K1r",
            OperatorKind::K1 => "K1",
            OperatorKind::K2 => "K2",
            OperatorKind::K3 => "K3",
            OperatorKind::K1Tilde => "K1~",
            OperatorKind::K1Hat => "K1^",
            OperatorKind::K2Tilde => "K2~",
            OperatorKind::K2Hat => "K2^",
        }
    }
}

/// Result of a quadrature together with its node-doubling error estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrated {
    pub series: PeriodicSeries,
    pub samples: Vec<f64>,
    pub error_estimate: f64,
}

/// Options shared by the operator and force integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationOptions {
    /// Number of collocation points in θ.
    pub grid: usize,
    /// Absolute tolerance on the node-doubling estimate.
    pub tolerance: f64,
}

impl IntegrationOptions {
    pub fn new(grid: usize) -> Self {
        Self {
            grid,
            tolerance: 1e-8,
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= MAX_QUADRATURE_EPS {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "epsilon {eps} outside the quadrature range (0, {MAX_QUADRATURE_EPS}]"
        )))
    }
}

/// Largest aspect ratio accepted by the kernel quadrature.
pub const MAX_QUADRATURE_EPS: f64 = 0.25;

fn operator_at(kind: OperatorKind, phi: &PeriodicSeries, layout: &QuadratureLayout, theta: f64) -> f64 {
    let mut total = 0.0;
    for col in &layout.columns {
        for an in &col.a {
            let plus = phi.eval(theta + an.a);
            let minus = phi.eval(theta - an.a);
            let (even, odd) = (plus + minus, plus - minus);
            let second = phi.second_difference(theta, an.a);
            let mut inner = 0.0;
            for en in &col.eta {
                let d0_sq = en.zb + an.z;
                let inv3 = 1.0 / (d0_sq * d0_sq.sqrt());
                let tilde = -1.5 * en.zb / d0_sq;
                let hat = -1.5 * an.z / d0_sq;
                let v = match kind {
                    OperatorKind::K1r => 4.0 * second * inv3,
                    OperatorKind::K1 => 4.0 * an.sin * odd * inv3,
                    OperatorKind::K2 => -2.0 * an.z * even * inv3,
                    OperatorKind::K3 => 2.0 * en.zb * even * inv3,
                    OperatorKind::K1Tilde => 4.0 * an.sin * odd * inv3 * tilde,
                    OperatorKind::K1Hat => 4.0 * an.sin * odd * inv3 * hat,
                    OperatorKind::K2Tilde => -2.0 * an.z * even * inv3 * tilde,
                    OperatorKind::K2Hat => -2.0 * an.z * even * inv3 * hat,
                };
                inner += en.weight * v;
            }
            total += an.weight * inner;
        }
    }
    total
}

fn integrate_on_grid(
    grid: usize,
    modes: usize,
    scheme: &QuadratureScheme,
    eps: f64,
    tolerance: f64,
    f: impl Fn(&QuadratureLayout, f64) -> f64 + Sync,
) -> Result<Integrated> {
    let thetas = theta_grid(grid);
    let coarse_layout = QuadratureLayout::new(scheme, eps)?;
    let fine_layout = QuadratureLayout::new(&scheme.doubled(), eps)?;
    let pairs: Vec<(f64, f64)> = thetas
        .par_iter()
        .map(|&t| (f(&coarse_layout, t), f(&fine_layout, t)))
        .collect();
    let error_estimate = pairs.iter().fold(0.0f64, |m, (c, f)| m.max((c - f).abs()));
    if !(error_estimate <= tolerance) {
        return Err(Error::QuadratureAccuracy {
            estimate: error_estimate,
            tolerance,
        });
    }
    let samples: Vec<f64> = pairs.into_iter().map(|(_, f)| f).collect();
    Ok(Integrated {
        series: PeriodicSeries::analyze(&samples, modes)?,
        samples,
        error_estimate,
    })
}

/// Applies one of the linear operators to `phi` (for `K1r`, `phi` is ρ).
///
/// The result is sampled on `opts.grid` collocation points and analyzed onto
/// the largest truncation the grid supports.
pub fn apply_operator(
    kind: OperatorKind,
    phi: &PeriodicSeries,
    eps: f64,
    scheme: &QuadratureScheme,
    opts: &IntegrationOptions,
) -> Result<Integrated> {
    check_eps(eps)?;
    let modes = (opts.grid - 1) / 2;
    integrate_on_grid(opts.grid, modes, scheme, eps, opts.tolerance, |layout, t| {
        operator_at(kind, phi, layout, t)
    })
}

/// `𝒦₃(ε) = 4∫₀^π∫₀^{π/ε} Z_β/(Z_β + z(a))^{3/2} da dη`, with its error estimate.
pub fn k3_scalar(eps: f64, scheme: &QuadratureScheme) -> Result<(f64, f64)> {
    check_eps(eps)?;
    let value = |layout: &QuadratureLayout| {
        layout.integrate(|an, en| {
            let d0_sq = en.zb + an.z;
            4.0 * en.zb / (d0_sq * d0_sq.sqrt())
        })
    };
    let coarse = value(&QuadratureLayout::new(scheme, eps)?);
    let fine = value(&QuadratureLayout::new(&scheme.doubled(), eps)?);
    Ok((fine, (fine - coarse).abs()))
}

/// Applies `𝒦₁` or `𝒦₂` to the density `σ(ρ, w)` (other kinds are rejected).
pub fn apply_to_sigma(
    kind: OperatorKind,
    state: &ShapeState,
    eps: f64,
    scheme: &QuadratureScheme,
    opts: &IntegrationOptions,
) -> Result<Integrated> {
    check_eps(eps)?;
    if !matches!(kind, OperatorKind::K1 | OperatorKind::K2) {
        return Err(Error::Precondition(format!("σ is only paired with K1 and K2, not {}", kind.name())));
    }
    let modes = (opts.grid - 1) / 2;
    integrate_on_grid(opts.grid, modes, scheme, eps, opts.tolerance, |layout, t| {
        let (rho_t, cos_t) = (state.rho.eval(t), t.cos());
        let mut total = 0.0;
        for col in &layout.columns {
            for an in &col.a {
                let side = |sign: f64| {
                    let alpha = t + sign * an.a;
                    let ra = state.rho.eval(alpha);
                    (ra - state.w.eval(alpha), alpha.cos(), ra)
                };
                let (p, m) = (side(1.0), side(-1.0));
                let mut inner = 0.0;
                for en in &col.eta {
                    let d0_sq = en.zb + an.z;
                    let inv3 = 1.0 / (d0_sq * d0_sq.sqrt());
                    let sigma = |s: (f64, f64, f64)| {
                        s.0 - 1.5 * (en.zb * (s.1 + cos_t) + an.z * (s.2 + rho_t)) / d0_sq
                    };
                    let v = match kind {
                        OperatorKind::K1 => 4.0 * an.sin * (sigma(p) - sigma(m)) * inv3,
                        _ => -2.0 * an.z * (sigma(p) + sigma(m)) * inv3,
                    };
                    inner += en.weight * v;
                }
                total += an.weight * inner;
            }
        }
        total
    })
}

/// Leading-order Fourier image of an operator (no quadrature).
pub fn fourier_image(kind: OperatorKind, phi: &PeriodicSeries) -> PeriodicSeries {
    let n = phi.truncation();
    let mut out = PeriodicSeries::zeros(n);
    let rotate = |factor: f64, out: &mut PeriodicSeries| {
        for k in 1..=n {
            out.set_mode(k, factor * phi.sin_coeff(k), -factor * phi.cos_coeff(k));
        }
    };
    let phi0 = 2.0 * phi.half_a0();
    match kind {
        OperatorKind::K1r => {
            for k in 1..=n {
                let f = -4.0 * PI * k as f64;
                out.set_mode(k, f * phi.cos_coeff(k), f * phi.sin_coeff(k));
            }
        }
        OperatorKind::K1 => rotate(4.0 * PI, &mut out),
        OperatorKind::K1Tilde => rotate(-2.0 * PI, &mut out),
        OperatorKind::K1Hat => rotate(-4.0 * PI, &mut out),
        OperatorKind::K2 => out.set_half_a0(-2.0 * PI * phi0),
        OperatorKind::K2Tilde => out.set_half_a0(PI * phi0),
        OperatorKind::K2Hat => out.set_half_a0(2.0 * PI * phi0),
        // 𝒦₃ grows like log(1/ε) and has no ε-independent image
        OperatorKind::K3 => out.set_half_a0(f64::NAN),
    }
    out
}

/// One coefficient of an operator output next to its Fourier image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageComparison {
    pub epsilon: f64,
    pub operator: String,
    /// Input mode `n` (0 for the constant input).
    pub mode: usize,
    /// Input trigonometric function: `cos`, `sin` or `const`.
    pub input: String,
    pub computed: f64,
    pub image: f64,
    pub error_estimate: f64,
}

impl ImageComparison {
    pub fn rel_error(&self) -> f64 {
        (self.computed - self.image).abs() / self.image.abs()
    }
}

fn leading_coefficient(image: &PeriodicSeries, computed: &PeriodicSeries) -> (f64, f64) {
    let mut best = (image.half_a0(), computed.half_a0());
    for k in 1..=image.truncation() {
        for (i, c) in [
            (image.cos_coeff(k), computed.cos_coeff(k)),
            (image.sin_coeff(k), computed.sin_coeff(k)),
        ] {
            if i.abs() > best.0.abs() {
                best = (i, c);
            }
        }
    }
    best
}

/// Applies every operator with an ε-independent image to `cos nθ`, `sin nθ`
/// (`n ≤ max_n`) or to the constant 1, and pairs the dominant output
/// coefficient with its image.
pub fn compare_with_images(eps: f64, max_n: usize, scheme: &QuadratureScheme) -> Result<Vec<ImageComparison>> {
    check_eps(eps)?;
    let opts = IntegrationOptions::new(2 * max_n + 1);
    let mut inputs: Vec<(OperatorKind, usize, &str, PeriodicSeries)> = Vec::new();
    for kind in [OperatorKind::K1r, OperatorKind::K1, OperatorKind::K1Tilde, OperatorKind::K1Hat] {
        for n in 1..=max_n {
            inputs.push((kind, n, "cos", PeriodicSeries::cos_mode(max_n, n, 1.0)));
            inputs.push((kind, n, "sin", PeriodicSeries::sin_mode(max_n, n, 1.0)));
        }
    }
    for kind in [OperatorKind::K2, OperatorKind::K2Tilde, OperatorKind::K2Hat] {
        inputs.push((kind, 0, "const", PeriodicSeries::constant(1.0, max_n)));
    }
    inputs
        .into_iter()
        .map(|(kind, mode, input, phi)| {
            let out = apply_operator(kind, &phi, eps, scheme, &opts)?;
            let (image, computed) = leading_coefficient(&fourier_image(kind, &phi), &out.series);
            Ok(ImageComparison {
                epsilon: eps,
                operator: kind.name().to_string(),
                mode,
                input: input.to_string(),
                computed,
                image,
                error_estimate: out.error_estimate,
            })
        })
        .collect()
}

/// One verified entry of the canonical-integral table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalEntry {
    pub name: String,
    pub parameter: f64,
    pub computed: f64,
    pub exact: f64,
}

impl CanonicalEntry {
    pub fn abs_error(&self) -> f64 {
        (self.computed - self.exact).abs()
    }
}

fn gauss_panels(lo: f64, hi: f64, panels: usize, f: &impl Fn(f64) -> f64) -> f64 {
    use gauss_quad::GaussLegendre;
    let rule = GaussLegendre::new(std::num::NonZeroUsize::new(20).unwrap());
    let h = (hi - lo) / panels as f64;
    (0..panels)
        .map(|p| rule.integrate(lo + p as f64 * h, lo + (p + 1) as f64 * h, f))
        .sum()
}

/// `∫₀^∞ f(ξ)dξ` for integrands decaying at least like `ξ⁻³`: geometric panels
/// on `[0, X]` and the substitution `ξ = 1/u` on the tail.
fn half_line(scale: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut total = gauss_panels(0.0, scale, 4, &f);
    let mut lo = scale;
    for _ in 0..12 {
        total += gauss_panels(lo, 2.0 * lo, 2, &f);
        lo *= 2.0;
    }
    total + gauss_panels(0.0, 1.0 / lo, 4, &|u: f64| if u == 0.0 { 0.0 } else { f(1.0 / u) / (u * u) })
}

/// Exact integrals behind the leading-order Fourier images.
pub fn canonical_integrals(a_values: &[f64], max_n: usize) -> Vec<CanonicalEntry> {
    let mut out = Vec::new();
    for &a in a_values {
        let s = a.sqrt();
        let entries: [(&str, f64, Box<dyn Fn(f64) -> f64>); 3] = [
            ("a/(xi^2+a)^(3/2)", 1.0, Box::new(move |x: f64| a / (x * x + a).powf(1.5))),
            ("xi^2 a/(xi^2+a)^(5/2)", 1.0 / 3.0, Box::new(move |x: f64| x * x * a / (x * x + a).powf(2.5))),
            ("a^2/(xi^2+a)^(5/2)", 2.0 / 3.0, Box::new(move |x: f64| a * a / (x * x + a).powf(2.5))),
        ];
        for (name, exact, f) in entries {
            out.push(CanonicalEntry {
                name: name.to_string(),
                parameter: a,
                computed: half_line(s, f),
                exact,
            });
        }
    }
    for n in 1..=max_n {
        let nf = n as f64;
        // sin²(nα/2)/sin²(α/2) = (1 − cos nα)/(1 − cos α), finite at α = 0
        let fejer = move |x: f64| {
            let d = (0.5 * x).sin();
            let q = (0.5 * nf * x).sin() / d;
            q * q
        };
        out.push(CanonicalEntry {
            name: "(1-cos n alpha)/(1-cos alpha)".to_string(),
            parameter: nf,
            computed: gauss_panels(0.0, PI, 4 + n / 2, &fejer),
            exact: nf * PI,
        });
        // sin α/(2(1 − cos α)) = cot(α/2)/2; the product with sin nα is bounded
        let paired = move |x: f64| (nf * x).sin() / (2.0 * (0.5 * x).tan());
        out.push(CanonicalEntry {
            name: "sin alpha sin n alpha/(2(1-cos alpha))".to_string(),
            parameter: nf,
            computed: 2.0 * gauss_panels(0.0, PI, 4 + n / 2, &paired),
            exact: PI,
        });
    }
    out
}

/// Newtonian force profiles in units of `ω₀r₀·εc(ε)`, divided by `ω(θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Forces {
    pub grid: Vec<f64>,
    /// `fʳ/ω` on the grid.
    pub fr: Vec<f64>,
    /// `f^θ/ω` on the grid.
    pub ftheta: Vec<f64>,
    /// `⟨f/ω⟩` with `f = fʳ cos θ − f^θ sin θ`.
    pub mean_f: f64,
    /// Node-doubling estimate, if one was requested.
    pub error_estimate: Option<f64>,
}

impl Forces {
    pub fn series(&self, modes: usize) -> Result<(PeriodicSeries, PeriodicSeries)> {
        Ok((
            PeriodicSeries::analyze(&self.fr, modes)?,
            PeriodicSeries::analyze(&self.ftheta, modes)?,
        ))
    }
}

/// Paired integrals `(Iʳ, I^θ)` at one collocation angle.
fn force_integrals(state: &ShapeState, eps: f64, layout: &QuadratureLayout, theta: f64) -> (f64, f64) {
    let (st, ct) = theta.sin_cos();
    let rho_t = state.rho.eval(theta);
    let vt = 1.0 + eps * rho_t;
    let pt = 1.0 + eps * vt * ct;
    let inv_eps = 1.0 / eps;
    let e2 = eps * eps;
    let (mut ir, mut it) = (0.0, 0.0);
    for col in &layout.columns {
        for an in &col.a {
            let side = |sign: f64| {
                let alpha = theta + sign * an.a;
                let drho = state.rho.increment(theta, sign * an.a);
                let va = vt + eps * drho;
                let pa = 1.0 + eps * va * alpha.cos();
                let inv_w = 1.0 / (1.0 + eps * state.w.eval(alpha));
                (drho, va, pa, inv_w, sign * an.sin)
            };
            let sides = [side(1.0), side(-1.0)];
            let (mut sr, mut stt) = (0.0, 0.0);
            for en in &col.eta {
                let (mut vr, mut vth) = (0.0, 0.0);
                for &(drho, va, pa, inv_w, sin_a) in &sides {
                    let d_sq = en.zb * pa * pt + an.z * va * vt + e2 * drho * drho;
                    let inv3 = inv_w / (d_sq * d_sq.sqrt());
                    vr += (-en.zb * ct * pa - an.z * va * inv_eps + 2.0 * drho) * inv3;
                    vth += (en.zb * st * pa + 2.0 * sin_a * va * inv_eps) * inv3;
                }
                sr += en.weight * vr;
                stt += en.weight * vth;
            }
            ir += an.weight * sr;
            it += an.weight * stt;
        }
    }
    (ir, it)
}

/// Newtonian forces on the `grid`-point collocation grid.
///
/// With `estimate_error` the integrals are repeated on the doubled scheme,
/// the doubled values are returned, and their difference is reported.
pub fn newtonian_forces(
    state: &ShapeState,
    eps: f64,
    scheme: &QuadratureScheme,
    grid: usize,
    estimate_error: bool,
) -> Result<Forces> {
    // the force integrals are exact, so they are not held to the operator cap
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidConfig(format!("epsilon {eps} outside (0, 1]")));
    }
    state.check_nondegenerate(eps)?;
    let thetas = theta_grid(grid);
    let layout = QuadratureLayout::new(scheme, eps)?;
    let fine = if estimate_error {
        Some(QuadratureLayout::new(&scheme.doubled(), eps)?)
    } else {
        None
    };
    let rows: Vec<((f64, f64), Option<(f64, f64)>)> = thetas
        .par_iter()
        .map(|&t| {
            let coarse = force_integrals(state, eps, &layout, t);
            let refined = fine.as_ref().map(|l| force_integrals(state, eps, l, t));
            (coarse, refined)
        })
        .collect();

    let mut fr = Vec::with_capacity(grid);
    let mut ftheta = Vec::with_capacity(grid);
    let mut err = 0.0f64;
    for (&t, (coarse, refined)) in thetas.iter().zip(&rows) {
        let scale = 2.0 / state.rate_ratio(eps, t);
        let (ir, it) = match refined {
            Some(f) => {
                err = err.max(scale * (f.0 - coarse.0).abs()).max(scale * (f.1 - coarse.1).abs());
                *f
            }
            None => *coarse,
        };
        fr.push(scale * ir);
        ftheta.push(scale * it);
    }
    let f: Vec<f64> = thetas
        .iter()
        .zip(fr.iter().zip(&ftheta))
        .map(|(t, (r, th))| r * t.cos() - th * t.sin())
        .collect();
    Ok(Forces {
        grid: thetas,
        mean_f: bracket_of_samples(&f),
        fr,
        ftheta,
        error_estimate: estimate_error.then_some(err),
    })
}
