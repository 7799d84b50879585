//! Stationary rotating-and-rolling motions of a thin self-gravitating toroidal stratum.
//!
//! The crate computes the shape perturbation ρ and rolling-rate perturbation w
//! of a torus of aspect ratio ε by a contraction iteration built on the exact
//! Fourier inverse of the linearized system, with the Newtonian self-attraction
//! evaluated by singularity-resolving quadrature.
//!
//! * [`spectra`]: truncated Fourier series and Sobolev norms
//! * [`geometry`]: parameterization, frames and kinematics
//! * [`quadrature`] and [`kernels`]: the attraction integrals
//! * [`solver`]: the fixed-point solve and profile reconstruction
//! * [`validation`]: independent identity and residual checks

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod quadrature;
pub mod solver;
pub mod spectra;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::{ShapeState, TorusConfig};
pub use quadrature::QuadratureScheme;
pub use solver::{fixed_point_solve, EquilibriumSolution, SolverConfig};
pub use spectra::{Admissible, PeriodicSeries};
