use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use torus_stratum::kernels::{canonical_integrals, compare_with_images, k3_scalar};
use torus_stratum::solver::fixed_point_solve_with;
use torus_stratum::validation::{check_asymptotics, kinematic_power_bracket, validate_solution, ValidationOptions, SPECTRAL_TOL};
use torus_stratum::{EquilibriumSolution, PeriodicSeries, ShapeState};

use crate::config::{Format, Settings};
use crate::output::{self, SweepRow};
use crate::{exit_code, CliError};

fn solve_one(settings: &Settings, epsilon: f64, verbose: bool) -> Result<EquilibriumSolution, CliError> {
    let torus = settings.torus(epsilon)?;
    let solver = settings.solver()?;
    let sol = fixed_point_solve_with(&torus, &solver, |r| {
        if verbose {
            eprintln!(
                "iter {:>3}  step {:.3e}  ‖x‖_X {:.6}  c {:.10}  residual/ε {:.3e}",
                r.iteration, r.step, r.x_norm, r.c_eps, r.max_scaled_residual
            );
        }
    })?;
    Ok(sol)
}

fn summary(sol: &EquilibriumSolution) -> String {
    format!(
        "ε = {}: converged in {} iterations (step {:.2e}, contraction ratio {:.3e}); c(ε) = {:.12}, ‖ρ‖ = {:.6e}, ‖w − w̄‖ = {:.6e}",
        sol.torus.epsilon,
        sol.diagnostics.iterations,
        sol.diagnostics.final_step,
        sol.diagnostics.contraction_ratio,
        sol.c_eps,
        sol.rho_norm(),
        sol.w_deviation()
    )
}

pub fn solve(settings: Settings, verbose: bool) -> Result<(), CliError> {
    let sol = solve_one(&settings, settings.epsilon(), verbose)?;
    let dir = settings.out_dir("run");
    output::write_solution(&dir, &sol)?;
    println!("{}", summary(&sol));
    println!("wrote {}", dir.display());
    Ok(())
}

fn status_name(err: &CliError) -> String {
    use torus_stratum::Error as E;
    match err {
        CliError::Core(E::OutsideBall { .. }) => "outside-ball".into(),
        CliError::Core(E::NoConvergence { .. }) => "no-convergence".into(),
        CliError::Core(E::InvalidRegime { .. }) => "invalid-regime".into(),
        CliError::Core(E::DegenerateShape { .. }) => "degenerate-shape".into(),
        other => format!("error-{}", exit_code(other)),
    }
}

pub fn sweep(settings: Settings) -> Result<(), CliError> {
    let values = settings.sweep_values()?;
    settings.solver()?;
    let dir = settings.out_dir("sweep");
    let mut rows = Vec::with_capacity(values.len());
    let mut worst: Option<CliError> = None;
    for eps in values {
        let result = solve_one(&settings, eps, false).and_then(|sol| {
            output::write_solution(&dir.join(format!("eps_{eps}")), &sol)?;
            Ok(sol)
        });
        match result {
            Ok(sol) => {
                println!("{}", summary(&sol));
                rows.push(SweepRow {
                    epsilon: eps,
                    status: "converged".into(),
                    solution: Some(sol),
                });
            }
            Err(e) => {
                eprintln!("ε = {eps}: {e}");
                rows.push(SweepRow {
                    epsilon: eps,
                    status: status_name(&e),
                    solution: None,
                });
                if worst.as_ref().map_or(true, |w| exit_code(&e) > exit_code(w)) {
                    worst = Some(e);
                }
            }
        }
    }
    output::write_atomic(&dir.join("sweep.csv"), &output::sweep_csv(&rows))?;
    let solved: Vec<EquilibriumSolution> = rows.iter().filter_map(|r| r.solution.clone()).collect();
    if solved.len() >= 3 {
        let report = check_asymptotics(&solved)?;
        print!("{}", output::report_table(&report));
        output::write_atomic(&dir.join("asymptotics.json"), &output::report_json(&report))?;
    }
    println!("wrote {}", dir.display());
    worst.map_or(Ok(()), Err)
}

/// An admissible state with coefficients decaying like `n⁻³`.
fn random_state(seed: u64, modes: usize) -> ShapeState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
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

pub fn validate(settings: Settings, input: Option<PathBuf>) -> Result<(), CliError> {
    let sol = match &input {
        Some(path) => output::read_solution(path)?,
        None => solve_one(&settings, settings.epsilon(), false)?,
    };
    let mut report = validate_solution(&sol, &ValidationOptions::default())?;
    let modes = sol.state.modes();
    let (v, scale) = kinematic_power_bracket(
        &random_state(settings.seed.unwrap_or(0), modes),
        &sol.torus,
        4 * modes + 1,
    );
    report.push("kinematic_power_random_state", (v / scale).abs(), SPECTRAL_TOL);

    print!("{}", output::report_table(&report));
    let dir = settings.out_dir("validation");
    match settings.format() {
        Format::Json => output::write_atomic(&dir.join("report.json"), &output::report_json(&report))?,
        Format::Csv => output::write_atomic(&dir.join("report.csv"), &output::report_csv(&report))?,
    }
    let failed = report.checks.iter().filter(|c| !c.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

pub fn kernels(settings: Settings, image_modes: usize) -> Result<(), CliError> {
    if image_modes < 1 {
        return Err(CliError::Usage("--image-modes must be at least 1".into()));
    }
    let eps_list = settings.eps.clone().unwrap_or_else(|| vec![0.1, 0.01, 0.001]);
    let scheme = settings.solver()?.quad;
    let mut k3 = Vec::with_capacity(eps_list.len());
    let mut images = Vec::new();
    for &eps in &eps_list {
        let (value, err) = k3_scalar(eps, &scheme)?;
        k3.push((eps, value, err));
        let rows = compare_with_images(eps, image_modes, &scheme)?;
        let worst = rows.iter().map(|r| r.rel_error()).fold(0.0f64, f64::max);
        println!("ε = {eps}: K3 = {value:.10}, K3/(1 + log 1/ε) = {:.6}, worst image error {worst:.3e}", value / (1.0 + (1.0 / eps).ln()));
        images.extend(rows);
    }
    let canonical = canonical_integrals(&[0.1, 1.0, 10.0], 16);
    let worst = canonical.iter().map(|c| c.abs_error()).fold(0.0f64, f64::max);
    println!("canonical integrals: {} entries, worst error {worst:.3e}", canonical.len());

    let dir = settings.out_dir("kernels");
    output::write_atomic(&dir.join("K3.csv"), &output::k3_csv(&k3))?;
    output::write_atomic(&dir.join("canonical.csv"), &output::canonical_csv(&canonical))?;
    output::write_atomic(&dir.join("images.csv"), &output::images_csv(&images))?;
    if settings.format() == Format::Json {
        let tables = output::KernelTables {
            schema_version: output::SCHEMA_VERSION,
            k3,
            canonical: &canonical,
            images: &images,
        };
        output::write_atomic(&dir.join("kernels.json"), &output::kernels_json(&tables))?;
    }
    println!("wrote {}", dir.display());
    Ok(())
}
