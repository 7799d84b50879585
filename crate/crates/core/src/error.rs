use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{samples} samples cannot resolve {modes} modes (need at least {})", 2 * .modes + 1)]
    UnderResolved { samples: usize, modes: usize },

    #[error("degenerate shape: r(θ)/r₀ = {min_ratio:.4} at θ = {theta:.4} is below the 0.5 guard")]
    DegenerateShape { theta: f64, min_ratio: f64 },

    #[error("thickness s = {value:e} at θ = {theta:.4} is not positive")]
    InvalidThickness { theta: f64, value: f64 },

    #[error("coincident points: the kernel is singular at (α, β) = (θ, 0)")]
    SingularPoint,

    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    QuadratureAccuracy { estimate: f64, tolerance: f64 },

    #[error("invalid regime: mean attraction ⟨f/ω⟩ = {mean_force:e} is not negative, Ω² would be negative")]
    InvalidRegime { mean_force: f64 },

    #[error("contraction failed: iterate {iteration} left the ball (‖x‖_X = {norm:.4e} > M = {radius:.4e})")]
    OutsideBall {
        iteration: usize,
        norm: f64,
        radius: f64,
    },

    #[error("contraction failed: no convergence after {iterations} iterations (last step {last_step:e})")]
    NoConvergence { iterations: usize, last_step: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("sweep needs at least {needed} solved ε values, got {got}")]
    InsufficientSweep { needed: usize, got: usize },
}
