//! Run configuration: CLI flags over a flat TOML file over defaults.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use torus_stratum::{QuadratureScheme, SolverConfig, TorusConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Flags shared by every subcommand. The config file uses the same names.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Settings {
    /// Aspect ratio ε = r₀/R
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// First ε of a geometric sweep
    #[arg(long)]
    pub eps_from: Option<f64>,
    /// Last ε of a geometric sweep (inclusive)
    #[arg(long)]
    pub eps_to: Option<f64>,
    /// Ratio between consecutive sweep values
    #[arg(long)]
    pub eps_factor: Option<f64>,
    /// Explicit ε list, comma separated
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub eps: Option<Vec<f64>>,
    /// Fourier truncation N
    #[arg(long)]
    pub modes: Option<usize>,
    /// Stop when the X-norm step falls below this
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Radius M of the contraction ball (default 2‖(0, w̄)‖_X)
    #[arg(long)]
    pub ball_radius: Option<f64>,
    #[arg(long)]
    pub r0: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    /// Product Gμ
    #[arg(long)]
    pub mu_g: Option<f64>,
    /// Collocation points in θ (default 2N + 1)
    #[arg(long)]
    pub theta_nodes: Option<usize>,
    #[arg(long)]
    pub alpha_nodes: Option<usize>,
    #[arg(long)]
    pub eta_nodes: Option<usize>,
    /// Dyadic layers around the singular corner
    #[arg(long)]
    pub refine_depth: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Seed for randomized checks
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat TOML file with any of the keys above
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// Fills unset flags from the config file, if one was given.
    pub fn merged(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = read_config(&path)?;
        overlay!(self, file; epsilon, eps_from, eps_to, eps_factor, eps, modes, tol, max_iter,
            ball_radius, r0, omega0, mu_g, theta_nodes, alpha_nodes, eta_nodes, refine_depth,
            out, format, seed);
        Ok(self)
    }

    pub fn torus(&self, epsilon: f64) -> Result<TorusConfig, CliError> {
        Ok(TorusConfig::new(
            self.r0.unwrap_or(1.0),
            self.omega0.unwrap_or(1.0),
            self.mu_g.unwrap_or(1.0),
            epsilon,
        )?)
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let modes = self.modes.unwrap_or(32);
        if modes < 4 {
            return Err(CliError::Usage(format!("--modes must be at least 4, got {modes}")));
        }
        let mut s = SolverConfig::new(modes);
        let d = QuadratureScheme::default();
        s.tol = self.tol.unwrap_or(s.tol);
        s.max_iter = self.max_iter.unwrap_or(s.max_iter);
        s.ball_radius = self.ball_radius.unwrap_or(s.ball_radius);
        s.theta_nodes = self.theta_nodes.unwrap_or(s.theta_nodes);
        s.quad = QuadratureScheme {
            alpha_nodes: self.alpha_nodes.unwrap_or(d.alpha_nodes),
            eta_nodes: self.eta_nodes.unwrap_or(d.eta_nodes),
            refinement_depth: self.refine_depth.unwrap_or(d.refinement_depth),
            ..d
        };
        s.validate()?;
        Ok(s)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon.unwrap_or(0.02)
    }

    pub fn out_dir(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    /// The sweep values: an explicit list, or `from, from·factor, …` up to `to`.
    pub fn sweep_values(&self) -> Result<Vec<f64>, CliError> {
        if let Some(list) = &self.eps {
            if list.is_empty() {
                return Err(CliError::Usage("empty ε list".into()));
            }
            return Ok(list.clone());
        }
        let (Some(from), Some(to)) = (self.eps_from, self.eps_to) else {
            return Err(CliError::Usage("sweep needs --eps or --eps-from and --eps-to".into()));
        };
        let factor = self.eps_factor.unwrap_or(0.5);
        let valid = from > 0.0
            && to > 0.0
            && factor > 0.0
            && factor != 1.0
            && ((factor < 1.0 && to <= from) || (factor > 1.0 && to >= from));
        if !valid {
            return Err(CliError::Usage(format!(
                "empty ε range: from {from} to {to} with factor {factor}"
            )));
        }
        let slack = 1e-9;
        let mut values = Vec::new();
        let mut e = from;
        while (factor < 1.0 && e >= to * (1.0 - slack)) || (factor > 1.0 && e <= to * (1.0 + slack)) {
            values.push(e);
            e *= factor;
        }
        Ok(values)
    }
}

fn read_config(path: &Path) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
}
