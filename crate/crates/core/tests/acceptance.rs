//! Acceptance run: every criterion prints one PASS/FAIL line, and the test
//! fails at the end if any criterion failed.
//!
//! Lines go straight to stderr so they show up even when the harness captures
//! output.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use torus_stratum::geometry::{w_bar, ShapeState, TorusConfig};
use torus_stratum::kernels::{canonical_integrals, compare_with_images, k3_scalar};
use torus_stratum::solver::{apply_l, fixed_point_solve, fixed_point_solve_with, invert_l, SolverConfig};
use torus_stratum::validation::{
    check_asymptotics, kinematic_power_bracket, validate_solution, ValidationOptions, SPECTRAL_TOL,
};
use torus_stratum::{EquilibriumSolution, PeriodicSeries, QuadratureScheme};

const CANONICAL_TOL: f64 = 1e-10;
const CANONICAL_TIME: Duration = Duration::from_secs(1);

const IMAGE_EPS: f64 = 1e-3;
const IMAGE_COARSE_EPS: f64 = 1e-2;
const IMAGE_MODES: usize = 6;
const K1_FAMILY_TOL: f64 = 0.02;
const K2_FAMILY_TOL: f64 = 0.01;
const BAND_SHRINK: f64 = 2.0;
const IMAGE_TIME: Duration = Duration::from_secs(60);

/// Frozen bracket for 𝒦₃/(1 + log 1/ε); the first run measured 12.66..12.83.
const K3_LOWER: f64 = 12.5;
const K3_UPPER: f64 = 13.0;

const ROUND_TRIP_TOL: f64 = 1e-13;
const ROUND_TRIP_SAMPLES: usize = 100;
const MODES: usize = 32;

const CONTRACTION_EPS: f64 = 0.02;
const CONTRACTION_STEP: f64 = 1e-8;
const CONTRACTION_MAX_ITER: usize = 50;

const SWEEP: [f64; 3] = [0.04, 0.02, 0.01];
/// Ball for the sweep: the trends do not depend on it, see criterion 5.
const SWEEP_BALL: f64 = 2.0;
const RANDOM_STATES: usize = 20;

struct Outcome {
    lines: Vec<String>,
    failed: Vec<usize>,
}

impl Outcome {
    fn record(&mut self, id: usize, name: &str, pass: bool, detail: String) {
        let line = format!("[{}] {id} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{line}");
        let _ = err.flush();
        self.lines.push(line);
        if !pass {
            self.failed.push(id);
        }
    }
}

fn canonical(out: &mut Outcome) {
    let start = Instant::now();
    let rows = canonical_integrals(&[0.1, 1.0, 10.0], 16);
    let elapsed = start.elapsed();
    let worst = rows.iter().map(|r| r.abs_error()).fold(0.0f64, f64::max);
    out.record(
        1,
        "canonical integrals",
        worst <= CANONICAL_TOL && elapsed < CANONICAL_TIME && rows.len() == 9 + 32,
        format!("{} integrals, worst error {worst:.2e} (tol {CANONICAL_TOL:.0e}), {elapsed:.2?}", rows.len()),
    );
}

fn images(out: &mut Outcome) {
    let scheme = QuadratureScheme::default();
    let start = Instant::now();
    let fine = compare_with_images(IMAGE_EPS, IMAGE_MODES, &scheme).expect("operators at ε = 1e-3");
    let coarse = compare_with_images(IMAGE_COARSE_EPS, IMAGE_MODES, &scheme).expect("operators at ε = 1e-2");
    let elapsed = start.elapsed();

    let band = |rows: &[torus_stratum::kernels::ImageComparison]| rows.iter().map(|r| r.rel_error()).fold(0.0f64, f64::max);
    let worst_of = |prefix: &str| {
        fine.iter()
            .filter(|r| r.operator.starts_with(prefix))
            .map(|r| r.rel_error())
            .fold(0.0f64, f64::max)
    };
    let k1r = fine.iter().filter(|r| r.operator == "K1r").map(|r| r.rel_error()).fold(0.0f64, f64::max);
    let k1 = fine
        .iter()
        .filter(|r| r.operator.starts_with("K1") && r.operator != "K1r")
        .map(|r| r.rel_error())
        .fold(0.0f64, f64::max);
    let k2 = worst_of("K2");
    let shrink = band(&coarse) / band(&fine);
    let pass = k1r <= K1_FAMILY_TOL
        && k1 <= K1_FAMILY_TOL
        && k2 <= K2_FAMILY_TOL
        && shrink >= BAND_SHRINK
        && elapsed < IMAGE_TIME;
    out.record(
        2,
        "Fourier images",
        pass,
        format!(
            "at ε = {IMAGE_EPS:.0e}: K1r {k1r:.2e}, K1 family {k1:.2e}, K2 family {k2:.2e}; band shrinks {shrink:.1}x from ε = {IMAGE_COARSE_EPS:.0e}; {elapsed:.2?}"
        ),
    );
}

fn k3_bracket(out: &mut Outcome) {
    let scheme = QuadratureScheme::default();
    let values: Vec<(f64, f64)> = [1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&eps| (eps, k3_scalar(eps, &scheme).expect("K3").0))
        .collect();
    let increasing = values.windows(2).all(|w| w[1].1 > w[0].1);
    let ratios: Vec<f64> = values.iter().map(|&(eps, k)| k / (1.0 + (1.0 / eps).ln())).collect();
    let inside = ratios.iter().all(|r| (K3_LOWER..=K3_UPPER).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.3}")).collect();
    out.record(
        3,
        "K3 log bracket",
        increasing && inside,
        format!(
            "increasing: {increasing}; K3/(1 + log 1/ε) = [{}] within [{K3_LOWER}, {K3_UPPER}]",
            shown.join(", ")
        ),
    );
}

fn random_series(rng: &mut ChaCha8Rng, modes: usize, first: usize) -> PeriodicSeries {
    let mut s = PeriodicSeries::zeros(modes);
    for n in first..=modes {
        s.set_mode(n, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    s
}

fn linear_algebra(out: &mut Outcome) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..ROUND_TRIP_SAMPLES {
        // x ∈ X: ρ has no mean and no first harmonic, w has no mean
        let x = ShapeState::new(random_series(&mut rng, MODES, 2), random_series(&mut rng, MODES, 1));
        let (p, v) = apply_l(&x);
        let back = invert_l(&p, &v).expect("image of L is admissible");
        worst = worst.max(back.rho.max_coeff_diff(&x.rho)).max(back.w.max_coeff_diff(&x.w));

        let p = random_series(&mut rng, MODES, 1);
        let v = random_series(&mut rng, MODES, 2);
        let (p2, v2) = apply_l(&invert_l(&p, &v).expect("admissible data"));
        worst = worst.max(p2.max_coeff_diff(&p)).max(v2.max_coeff_diff(&v));
    }
    let base = invert_l(&PeriodicSeries::cos_mode(MODES, 1, 0.5), &PeriodicSeries::zeros(MODES)).expect("base data");
    let exact = base.rho == PeriodicSeries::zeros(MODES) && base.w == w_bar(MODES);
    out.record(
        4,
        "linear algebra",
        worst <= ROUND_TRIP_TOL && exact,
        format!(
            "{ROUND_TRIP_SAMPLES} round trips each way at N = {MODES}, worst {worst:.2e} (tol {ROUND_TRIP_TOL:.0e}); L⁻¹(cos/2, 0) = (0, −cos/4) exactly: {exact}"
        ),
    );
}

fn contraction(out: &mut Outcome) {
    let cfg = TorusConfig::unit(CONTRACTION_EPS).unwrap();
    let default = SolverConfig::new(MODES);
    let radius = default.ball_radius;
    let start = Instant::now();
    // the ball is not enforced here so that every other clause can be measured
    let open = SolverConfig {
        ball_radius: f64::INFINITY,
        ..default
    };
    let mut max_norm: f64 = 0.0;
    let result = fixed_point_solve_with(&cfg, &open, |r| max_norm = max_norm.max(r.x_norm));
    let strict = fixed_point_solve(&cfg, &default);
    let elapsed = start.elapsed();
    match result {
        Ok(sol) => {
            let d = &sol.diagnostics;
            let in_ball = max_norm <= radius;
            let pass = d.iterations <= CONTRACTION_MAX_ITER
                && d.final_step < CONTRACTION_STEP
                && d.contraction_ratio < 1.0
                && in_ball
                && strict.is_ok();
            out.record(
                5,
                "contraction",
                pass,
                format!(
                    "ε = {CONTRACTION_EPS}, N = {MODES}: {} iterations, final step {:.2e}, ratio {:.3}; largest iterate norm {max_norm:.4} vs M = {radius:.4} (in ball: {in_ball}); default-ball solve: {}; {elapsed:.2?}",
                    d.iterations,
                    d.final_step,
                    d.contraction_ratio,
                    match &strict {
                        Ok(_) => "ok".to_string(),
                        Err(e) => e.to_string(),
                    }
                ),
            );
        }
        Err(e) => out.record(5, "contraction", false, format!("no fixed point: {e}")),
    }
}

fn sweep() -> Vec<EquilibriumSolution> {
    SWEEP
        .iter()
        .map(|&eps| {
            let solver = SolverConfig {
                ball_radius: SWEEP_BALL,
                ..SolverConfig::new(MODES)
            };
            fixed_point_solve(&TorusConfig::unit(eps).unwrap(), &solver).expect("sweep solve")
        })
        .collect()
}

fn trends(out: &mut Outcome, sols: &[EquilibriumSolution]) {
    let report = check_asymptotics(sols).expect("three solutions");
    let detail: Vec<String> = report
        .checks
        .iter()
        .map(|c| format!("{} {:.4} (≤ {:.4})", c.name, c.value, c.tolerance))
        .collect();
    let values: Vec<String> = sols
        .iter()
        .map(|s| {
            format!(
                "ε = {}: ‖ρ‖ {:.4}, ‖w − w̄‖ {:.4}, ‖s − s̄‖/ε {:.4}, Ω̄/(ε√log) {:.4}",
                s.torus.epsilon,
                s.rho_norm(),
                s.w_deviation(),
                s.s_deviation_over_eps(),
                s.omega_log_scaled()
            )
        })
        .collect();
    out.record(6, "asymptotic trends", report.all_pass(), format!("{}; {}", detail.join(", "), values.join("; ")));
}

fn random_state(rng: &mut ChaCha8Rng, modes: usize) -> ShapeState {
    let mut rho = PeriodicSeries::zeros(modes);
    let mut w = PeriodicSeries::zeros(modes);
    for n in 1..=modes {
        let d = 0.5 / (n * n * n) as f64;
        if n >= 2 {
            rho.set_mode(n, d * rng.gen_range(-1.0..1.0), d * rng.gen_range(-1.0..1.0));
        }
        w.set_mode(n, d * rng.gen_range(-1.0..1.0), d * rng.gen_range(-1.0..1.0));
    }
    ShapeState::new(rho, w)
}

fn identities_and_residual(out: &mut Outcome, sols: &[EquilibriumSolution]) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut kin_worst: f64 = 0.0;
    for i in 0..RANDOM_STATES {
        let cfg = TorusConfig::unit(SWEEP[i % SWEEP.len()]).unwrap();
        let (v, scale) = kinematic_power_bracket(&random_state(&mut rng, MODES), &cfg, 4 * MODES + 1);
        kin_worst = kin_worst.max((v / scale).abs());
    }

    let identity_checks = [
        "first_integral",
        "kinematic_bracket_cos",
        "kinematic_bracket_sin",
        "kinematic_power",
        "force_bracket_cos",
        "force_bracket_sin",
        "power_bracket",
        "flux_constant",
    ];
    let residual_checks = ["force_balance", "force_balance_refinement"];
    let mut identity_pass = kin_worst <= SPECTRAL_TOL;
    let mut residual_pass = true;
    let mut identity_detail = vec![format!(
        "kinematic power on {RANDOM_STATES} random states {kin_worst:.2e} (≤ {SPECTRAL_TOL:.0e})"
    )];
    let mut residual_detail = Vec::new();
    for sol in sols {
        let report = validate_solution(sol, &ValidationOptions::default()).expect("validation runs");
        let worst = identity_checks
            .iter()
            .map(|n| report.get(n).expect("check present"))
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect::<Vec<_>>();
        identity_pass &= worst.is_empty();
        let fi = report.get("first_integral").unwrap();
        let pb = report.get("power_bracket").unwrap();
        identity_detail.push(format!(
            "ε = {}: first integral {:.1e}, power {:.1e}{}",
            sol.torus.epsilon,
            fi.value,
            pb.value,
            if worst.is_empty() {
                String::new()
            } else {
                format!(", failing {}", worst.join("/"))
            }
        ));
        let fb = report.get(residual_checks[0]).unwrap();
        let rf = report.get(residual_checks[1]).unwrap();
        residual_pass &= fb.pass && rf.pass;
        residual_detail.push(format!(
            "ε = {}: residual {:.2e} vs 10% of initial {:.2e}, coarse quadrature {:.2e}",
            sol.torus.epsilon, fb.value, fb.tolerance, rf.tolerance
        ));
    }
    out.record(7, "identity suite", identity_pass, identity_detail.join("; "));
    out.record(8, "independent residual", residual_pass, residual_detail.join("; "));
}

#[test]
fn acceptance() {
    let mut out = Outcome {
        lines: Vec::new(),
        failed: Vec::new(),
    };
    canonical(&mut out);
    images(&mut out);
    k3_bracket(&mut out);
    linear_algebra(&mut out);
    contraction(&mut out);
    let sols = sweep();
    trends(&mut out, &sols);
    identities_and_residual(&mut out, &sols);
    assert_eq!(out.lines.len(), 8);
    assert!(out.failed.is_empty(), "failed criteria: {:?}\n{}", out.failed, out.lines.join("\n"));
}
