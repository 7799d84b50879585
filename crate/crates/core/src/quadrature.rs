//! Node layouts for the rescaled double integrals over `(a, η)`.
//!
//! Kernels are integrated in `a = α − θ` and `η = β/ε`. After pairing `a`
//! with `−a` and using the evenness in `β`, the domain is
//! `[0, π] × [0, π/ε]` with a weak `1/dist` singularity at the corner
//! `(0, 0)`. The layout is
//!
//! * dyadic L-shaped layers around the corner: with `a_k = π/2^k`, layer `k`
//!   holds the cells `[a_{k+1}, a_k] × [0, a_k]` and `[0, a_{k+1}] × [a_{k+1}, a_k]`,
//! * an innermost square `[0, a_L]²`,
//! * a strip `[0, π] × [π, π/ε]` with geometric η-panels `[π 2^m, π 2^{m+1}]`.
//!
//! Every cell carries a tensor Gauss–Legendre rule, and cells sharing an
//! `a`-interval are grouped into one [`Column`] so callers can evaluate
//! profiles once per `a`-node.

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::chord;

/// Parameters of the `(a, η)` layout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureScheme {
    /// Gauss nodes per cell in `a`.
    pub alpha_nodes: usize,
    /// Gauss nodes per cell in `η`.
    pub eta_nodes: usize,
    /// Number of dyadic layers around the singular corner.
    pub refinement_depth: usize,
    /// Widest `a`-panel allowed (profiles vary on this scale).
    pub max_panel: f64,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self {
            alpha_nodes: 12,
            eta_nodes: 12,
            refinement_depth: 30,
            max_panel: PI / 8.0,
        }
    }
}

impl QuadratureScheme {
    pub fn validate(&self) -> Result<()> {
        if self.alpha_nodes < 2 || self.eta_nodes < 2 {
            return Err(Error::InvalidConfig("quadrature needs at least 2 nodes per cell".into()));
        }
        if self.refinement_depth < 1 || self.refinement_depth > 60 {
            return Err(Error::InvalidConfig(format!(
                "refinement depth {} outside 1..=60",
                self.refinement_depth
            )));
        }
        if !(self.max_panel > 0.0 && self.max_panel <= PI) {
            return Err(Error::InvalidConfig("max panel width must lie in (0, π]".into()));
        }
        Ok(())
    }

    /// The same layout with twice the nodes per cell, used for error estimates.
    pub fn doubled(&self) -> Self {
        Self {
            alpha_nodes: 2 * self.alpha_nodes,
            eta_nodes: 2 * self.eta_nodes,
            ..*self
        }
    }
}

/// A quadrature node in `a` with trigonometric data cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ANode {
    pub a: f64,
    pub weight: f64,
    /// `z(a) = 2(1 − cos a)`
    pub z: f64,
    pub sin: f64,
}

/// A quadrature node in `η` with `Z_β = z(εη)/ε²` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaNode {
    pub eta: f64,
    pub weight: f64,
    pub zb: f64,
}

/// Tensor product of `a`-nodes and `η`-nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub a: Vec<ANode>,
    pub eta: Vec<EtaNode>,
}

/// Concrete node layout for one `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureLayout {
    pub epsilon: f64,
    pub columns: Vec<Column>,
}

struct Rule(Vec<(f64, f64)>);

impl Rule {
    fn new(n: usize) -> Self {
        let gl = GaussLegendre::new(NonZeroUsize::new(n).expect("node count is positive"));
        let mut pairs = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        Self(pairs)
    }

    fn map(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        self.0.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }
}

fn a_nodes(rule: &Rule, lo: f64, hi: f64, max_panel: f64) -> Vec<ANode> {
    let panels = ((hi - lo) / max_panel).ceil().max(1.0) as usize;
    let h = (hi - lo) / panels as f64;
    let mut out = Vec::with_capacity(panels * rule.0.len());
    for p in 0..panels {
        let (p0, p1) = (lo + p as f64 * h, if p + 1 == panels { hi } else { lo + (p + 1) as f64 * h });
        for (a, weight) in rule.map(p0, p1) {
            out.push(ANode {
                a,
                weight,
                z: chord(a),
                sin: a.sin(),
            });
        }
    }
    out
}

fn eta_nodes(rule: &Rule, epsilon: f64, intervals: &[(f64, f64)]) -> Vec<EtaNode> {
    let mut out = Vec::new();
    for &(lo, hi) in intervals {
        for (eta, weight) in rule.map(lo, hi) {
            out.push(EtaNode {
                eta,
                weight,
                zb: chord(epsilon * eta) / (epsilon * epsilon),
            });
        }
    }
    out
}

impl QuadratureLayout {
    pub fn new(scheme: &QuadratureScheme, epsilon: f64) -> Result<Self> {
        scheme.validate()?;
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidConfig(format!("epsilon {epsilon} outside (0, 1]")));
        }
        let ra = Rule::new(scheme.alpha_nodes);
        let re = Rule::new(scheme.eta_nodes);
        let h = scheme.max_panel;
        let mut columns = Vec::new();

        let eta_max = PI / epsilon;
        if eta_max > PI {
            let mut panels = Vec::new();
            let mut lo = PI;
            while lo < eta_max {
                // merge a short final panel into its predecessor
                let hi = if 2.0 * lo >= eta_max / 1.5 { eta_max } else { 2.0 * lo };
                panels.push((lo, hi));
                lo = hi;
            }
            columns.push(Column {
                a: a_nodes(&ra, 0.0, PI, h),
                eta: eta_nodes(&re, epsilon, &panels),
            });
        }

        for k in 0..scheme.refinement_depth {
            let outer = PI / (1u64 << k) as f64;
            let inner = 0.5 * outer;
            columns.push(Column {
                a: a_nodes(&ra, inner, outer, h),
                eta: eta_nodes(&re, epsilon, &[(0.0, inner), (inner, outer)]),
            });
            columns.push(Column {
                a: a_nodes(&ra, 0.0, inner, h),
                eta: eta_nodes(&re, epsilon, &[(inner, outer)]),
            });
        }
        let last = PI / (1u64 << scheme.refinement_depth) as f64;
        columns.push(Column {
            a: a_nodes(&ra, 0.0, last, h),
            eta: eta_nodes(&re, epsilon, &[(0.0, last)]),
        });

        Ok(Self { epsilon, columns })
    }

    pub fn node_count(&self) -> usize {
        self.columns.iter().map(|c| c.a.len() * c.eta.len()).sum()
    }

    /// Integrates `f(a, η)` over `[0, π] × [0, π/ε]` in a fixed order.
    pub fn integrate(&self, mut f: impl FnMut(&ANode, &EtaNode) -> f64) -> f64 {
        let mut total = 0.0;
        for col in &self.columns {
            for an in &col.a {
                let mut inner = 0.0;
                for en in &col.eta {
                    inner += en.weight * f(an, en);
                }
                total += an.weight * inner;
            }
        }
        total
    }
}
