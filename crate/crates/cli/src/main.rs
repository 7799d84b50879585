//! `torus-solver`: solve, sweep, validate and inspect the attraction kernels.
//!
//! Exit codes: 0 success, 1 convergence failure or failed checks, 2 usage,
//! 3 I/O, 4 invalid regime (non-negative mean attraction or a degenerate shape).

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use config::Settings;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(torus_stratum::Error),
    ChecksFailed(usize),
}

impl From<torus_stratum::Error> for CliError {
    fn from(e: torus_stratum::Error) -> Self {
        match e {
            torus_stratum::Error::InvalidConfig(m) => CliError::Usage(m),
            other => CliError::Core(other),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::ChecksFailed(n) => write!(f, "{n} validation check(s) failed"),
        }
    }
}

pub fn exit_code(err: &CliError) -> u8 {
    use torus_stratum::Error as E;
    match err {
        CliError::Usage(_) => 2,
        CliError::Io(_) => 3,
        CliError::ChecksFailed(_) => 1,
        CliError::Core(e) => match e {
            E::OutsideBall { .. } | E::NoConvergence { .. } | E::QuadratureAccuracy { .. } => 1,
            E::InvalidConfig(_) | E::Precondition(_) | E::UnderResolved { .. } | E::InsufficientSweep { .. } => 2,
            E::InvalidRegime { .. } | E::DegenerateShape { .. } | E::InvalidThickness { .. } | E::SingularPoint => 4,
        },
    }
}

#[derive(Parser)]
#[command(name = "torus-solver", version, about = "Stationary rolling motions of a thin toroidal stratum")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for one ε and write solution.json and profiles.csv
    Solve {
        #[command(flatten)]
        settings: Settings,
        /// Print every iteration to stderr
        #[arg(short, long)]
        verbose: bool,
    },
    /// Solve over a list or geometric range of ε
    Sweep {
        #[command(flatten)]
        settings: Settings,
    },
    /// Run the independent checks on a solution (or solve first)
    Validate {
        #[command(flatten)]
        settings: Settings,
        /// solution.json or a run directory; omitted means solve inline
        #[arg(long)]
        input: Option<std::path::PathBuf>,
    },
    /// Tabulate 𝒦₃, the canonical integrals and operator images
    Kernels {
        #[command(flatten)]
        settings: Settings,
        /// Highest input mode for the image comparison
        #[arg(long, default_value_t = 6)]
        image_modes: usize,
    },
}

fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("TORUS_SOLVER_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("TORUS_SOLVER_THREADS={value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    init_threads()?;
    match cli.command {
        Command::Solve { settings, verbose } => commands::solve(settings.merged()?, verbose),
        Command::Sweep { settings } => commands::sweep(settings.merged()?),
        Command::Validate { settings, input } => commands::validate(settings.merged()?, input),
        Command::Kernels { settings, image_modes } => commands::kernels(settings.merged()?, image_modes),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
