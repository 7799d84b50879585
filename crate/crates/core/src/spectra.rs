//! Truncated Fourier series of 2π-periodic functions.
//!
//! A series is stored as `φ₀/2 + Σₙ (φₙ¹ cos nθ + φₙ² sin nθ)` for `n = 1..=N`,
//! with coefficients normalized as `φₙʲ = (1/π)∫₋π^π φ(θ){cos,sin}(nθ) dθ`.
//! Under this convention the bracket `⟨φ⟩ = ∫₋π^π φ dθ` equals `π·φ₀`.
//!
//! Sobolev norms are realized diagonally in Fourier space with the mode
//! weight `(1 + n²)ᵏ`:
//!
//! ```text
//! ‖φ‖²_k = |φ₀/2|² + Σₙ (1 + n²)ᵏ (|φₙ¹|² + |φₙ²|²)
//! ```
//!
//! Sampling grids are always `θⱼ = 2πj/M`, `j = 0..M`.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Equispaced grid `θⱼ = 2πj/M`.
pub fn theta_grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}

/// Which admissibility constraints to impose on a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissible {
    /// Zero mean and no first harmonics (the shape perturbation ρ).
    Shape,
    /// Zero mean only (the rolling-rate perturbation w).
    Rate,
}

/// Truncated Fourier representation of a 2π-periodic real function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSeries {
    half_a0: f64,
    #[serde(rename = "cos")]
    cos_coeffs: Vec<f64>,
    #[serde(rename = "sin")]
    sin_coeffs: Vec<f64>,
}

impl PeriodicSeries {
    /// Builds a series from its coefficients; `cos` and `sin` hold modes `1..=N`.
    pub fn new(half_a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        if cos.len() != sin.len() {
            return Err(Error::Precondition(format!(
                "cosine and sine coefficient lists differ in length ({} vs {})",
                cos.len(),
                sin.len()
            )));
        }
        Ok(Self {
            half_a0,
            cos_coeffs: cos,
            sin_coeffs: sin,
        })
    }

    pub fn zeros(modes: usize) -> Self {
        Self {
            half_a0: 0.0,
            cos_coeffs: vec![0.0; modes],
            sin_coeffs: vec![0.0; modes],
        }
    }

    pub fn constant(value: f64, modes: usize) -> Self {
        let mut s = Self::zeros(modes);
        s.half_a0 = value;
        s
    }

    /// `amplitude · cos(nθ)` truncated at `modes` (requires `1 ≤ n ≤ modes`).
    pub fn cos_mode(modes: usize, n: usize, amplitude: f64) -> Self {
        let mut s = Self::zeros(modes);
        s.cos_coeffs[n - 1] = amplitude;
        s
    }

    /// `amplitude · sin(nθ)` truncated at `modes` (requires `1 ≤ n ≤ modes`).
    pub fn sin_mode(modes: usize, n: usize, amplitude: f64) -> Self {
        let mut s = Self::zeros(modes);
        s.sin_coeffs[n - 1] = amplitude;
        s
    }

    /// Discrete trapezoidal projection of equispaced samples onto modes `0..=modes`.
    ///
    /// Exact for trigonometric polynomials of degree `≤ modes` whenever
    /// `samples.len() ≥ 2·modes + 1`.
    pub fn analyze(samples: &[f64], modes: usize) -> Result<Self> {
        let m = samples.len();
        if m < 2 * modes + 1 {
            return Err(Error::UnderResolved { samples: m, modes });
        }
        let scale = 2.0 / m as f64;
        let half_a0 = samples.iter().sum::<f64>() / m as f64;
        let mut cos_coeffs = vec![0.0; modes];
        let mut sin_coeffs = vec![0.0; modes];
        for n in 1..=modes {
            let (mut c, mut s) = (0.0, 0.0);
            for (j, &f) in samples.iter().enumerate() {
                // reduce n·j mod m so the angle stays in [0, 2π)
                let angle = 2.0 * PI * ((n * j) % m) as f64 / m as f64;
                c += f * angle.cos();
                s += f * angle.sin();
            }
            cos_coeffs[n - 1] = scale * c;
            sin_coeffs[n - 1] = scale * s;
        }
        Ok(Self {
            half_a0,
            cos_coeffs,
            sin_coeffs,
        })
    }

    /// Samples `f` on an `m`-point grid and analyzes onto `modes` modes.
    pub fn from_fn(m: usize, modes: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let samples: Vec<f64> = theta_grid(m).into_iter().map(f).collect();
        Self::analyze(&samples, modes)
    }

    pub fn truncation(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn half_a0(&self) -> f64 {
        self.half_a0
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    /// φₙ¹ for `n ≥ 1`; zero beyond the truncation.
    pub fn cos_coeff(&self, n: usize) -> f64 {
        self.cos_coeffs.get(n.wrapping_sub(1)).copied().unwrap_or(0.0)
    }

    /// φₙ² for `n ≥ 1`; zero beyond the truncation.
    pub fn sin_coeff(&self, n: usize) -> f64 {
        self.sin_coeffs.get(n.wrapping_sub(1)).copied().unwrap_or(0.0)
    }

    pub fn set_half_a0(&mut self, value: f64) {
        self.half_a0 = value;
    }

    pub fn set_mode(&mut self, n: usize, cos: f64, sin: f64) {
        self.cos_coeffs[n - 1] = cos;
        self.sin_coeffs[n - 1] = sin;
    }

    /// Evaluates the series at `theta`.
    pub fn eval(&self, theta: f64) -> f64 {
        let (s1, c1) = theta.sin_cos();
        let (mut cn, mut sn) = (1.0, 0.0);
        let mut acc = self.half_a0;
        for (a, b) in self.cos_coeffs.iter().zip(&self.sin_coeffs) {
            let next_c = cn * c1 - sn * s1;
            sn = sn * c1 + cn * s1;
            cn = next_c;
            acc += a * cn + b * sn;
        }
        acc
    }

    /// `φ(θ + a) − φ(θ)`, summed as `Σ 2 sin(na/2)(φₙ² cos nu − φₙ¹ sin nu)` with
    /// `u = θ + a/2` so that small increments keep full relative accuracy.
    pub fn increment(&self, theta: f64, a: f64) -> f64 {
        let (su, cu) = (theta + 0.5 * a).sin_cos();
        let (sv, cv) = (0.5 * a).sin_cos();
        let (mut cn, mut sn) = (1.0, 0.0);
        let (mut cvn, mut svn) = (1.0, 0.0);
        let mut acc = 0.0;
        for (p, q) in self.cos_coeffs.iter().zip(&self.sin_coeffs) {
            let next_c = cn * cu - sn * su;
            sn = sn * cu + cn * su;
            cn = next_c;
            let next_cv = cvn * cv - svn * sv;
            svn = svn * cv + cvn * sv;
            cvn = next_cv;
            acc += 2.0 * svn * (q * cn - p * sn);
        }
        acc
    }

    /// `φ(θ + a) + φ(θ − a) − 2φ(θ)`, summed as `−Σ 4 sin²(na/2)(φₙ¹ cos nθ + φₙ² sin nθ)`.
    pub fn second_difference(&self, theta: f64, a: f64) -> f64 {
        let (st, ct) = theta.sin_cos();
        let (sv, cv) = (0.5 * a).sin_cos();
        let (mut cn, mut sn) = (1.0, 0.0);
        let (mut cvn, mut svn) = (1.0, 0.0);
        let mut acc = 0.0;
        for (p, q) in self.cos_coeffs.iter().zip(&self.sin_coeffs) {
            let next_c = cn * ct - sn * st;
            sn = sn * ct + cn * st;
            cn = next_c;
            let next_cv = cvn * cv - svn * sv;
            svn = svn * cv + cvn * sv;
            cvn = next_cv;
            acc -= 4.0 * svn * svn * (p * cn + q * sn);
        }
        acc
    }

    /// Values on the `m`-point grid.
    pub fn sample(&self, m: usize) -> Vec<f64> {
        theta_grid(m).into_iter().map(|t| self.eval(t)).collect()
    }

    /// Mode-wise derivative of the given order.
    pub fn derivative(&self, order: u32) -> Self {
        let mut out = self.clone();
        for _ in 0..order {
            out.half_a0 = 0.0;
            for n in 1..=out.truncation() {
                let (a, b) = (out.cos_coeffs[n - 1], out.sin_coeffs[n - 1]);
                let k = n as f64;
                out.cos_coeffs[n - 1] = k * b;
                out.sin_coeffs[n - 1] = -k * a;
            }
        }
        out
    }

    /// `⟨φ⟩ = ∫₋π^π φ dθ = 2π·(φ₀/2)`.
    pub fn bracket_mean(&self) -> f64 {
        2.0 * PI * self.half_a0
    }

    /// Mode-weighted Sobolev norm of order `k`.
    pub fn sobolev_norm(&self, k: u32) -> f64 {
        let mut acc = self.half_a0 * self.half_a0;
        for n in 1..=self.truncation() {
            let weight = (1.0 + (n * n) as f64).powi(k as i32);
            let (a, b) = (self.cos_coeffs[n - 1], self.sin_coeffs[n - 1]);
            acc += weight * (a * a + b * b);
        }
        acc.sqrt()
    }

    /// Removes the mean, and for [`Admissible::Shape`] also the first harmonics.
    pub fn project(&self, kind: Admissible) -> Self {
        let mut out = self.clone();
        out.half_a0 = 0.0;
        if kind == Admissible::Shape && out.truncation() >= 1 {
            out.cos_coeffs[0] = 0.0;
            out.sin_coeffs[0] = 0.0;
        }
        out
    }

    /// Drops every mode below `n_min` (including the mean).
    pub fn high_pass(&self, n_min: usize) -> Self {
        let mut out = self.clone();
        out.half_a0 = 0.0;
        for n in 1..n_min.min(out.truncation() + 1) {
            out.cos_coeffs[n - 1] = 0.0;
            out.sin_coeffs[n - 1] = 0.0;
        }
        out
    }

    /// Truncates or zero-pads to `modes` modes.
    pub fn resized(&self, modes: usize) -> Self {
        let mut out = self.clone();
        out.cos_coeffs.resize(modes, 0.0);
        out.sin_coeffs.resize(modes, 0.0);
        out
    }

    /// Largest absolute coefficient difference (series of unequal truncation
    /// are compared with implicit zero padding).
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let n = self.truncation().max(other.truncation());
        let mut m = (self.half_a0 - other.half_a0).abs();
        for k in 1..=n {
            m = m
                .max((self.cos_coeff(k) - other.cos_coeff(k)).abs())
                .max((self.sin_coeff(k) - other.sin_coeff(k)).abs());
        }
        m
    }

    /// Exact product of two series (truncation is the sum of both truncations).
    pub fn product(&self, other: &Self) -> Self {
        let modes = self.truncation() + other.truncation();
        let m = 2 * modes + 1;
        let samples: Vec<f64> = theta_grid(m)
            .into_iter()
            .map(|t| self.eval(t) * other.eval(t))
            .collect();
        Self::analyze(&samples, modes).expect("grid sized for the product degree")
    }

    /// Coefficient-wise linear combination `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &Self, b: f64) -> Self {
        let n = self.truncation().max(other.truncation());
        let mut out = Self::zeros(n);
        out.half_a0 = a * self.half_a0 + b * other.half_a0;
        for k in 1..=n {
            out.cos_coeffs[k - 1] = a * self.cos_coeff(k) + b * other.cos_coeff(k);
            out.sin_coeffs[k - 1] = a * self.sin_coeff(k) + b * other.sin_coeff(k);
        }
        out
    }
}

impl Add for &PeriodicSeries {
    type Output = PeriodicSeries;
    fn add(self, rhs: &PeriodicSeries) -> PeriodicSeries {
        self.axpby(1.0, rhs, 1.0)
    }
}

impl Sub for &PeriodicSeries {
    type Output = PeriodicSeries;
    fn sub(self, rhs: &PeriodicSeries) -> PeriodicSeries {
        self.axpby(1.0, rhs, -1.0)
    }
}

impl Mul<f64> for &PeriodicSeries {
    type Output = PeriodicSeries;
    fn mul(self, rhs: f64) -> PeriodicSeries {
        self.axpby(rhs, self, 0.0)
    }
}

impl Neg for &PeriodicSeries {
    type Output = PeriodicSeries;
    fn neg(self) -> PeriodicSeries {
        self * -1.0
    }
}

/// Trapezoidal bracket `⟨h⟩` of equispaced samples; exact for trigonometric
/// polynomials of degree below the sample count.
pub fn bracket_of_samples(samples: &[f64]) -> f64 {
    2.0 * PI * samples.iter().sum::<f64>() / samples.len() as f64
}
