//! Solver tolerances and options shared across the crate.

use serde::Serialize;

use crate::lp::LpOptions;

/// Numeric tolerances. Every report echoes the set it ran with.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    /// Relative feasibility/optimality tolerance of the LP solver.
    pub tol_feas: f64,
    /// Active-set tolerance on residuals, scaled by `1 + ‖b‖_∞` per block.
    pub tol_act: f64,
    /// Simplex pivot threshold.
    pub tol_pivot: f64,
    /// Stop the cutting-plane loop once the worst cone violation is below this.
    pub cut_tol: f64,
    /// Cap on generated cutting planes per solve.
    pub max_cuts: usize,
    /// Certificate accepted when the L1 stationarity residual is below this.
    pub cert_residual: f64,
    /// Objective perturbation magnitude of the uniqueness probe.
    pub probe_mu: f64,
    /// Minimizer-distance threshold of the uniqueness probe.
    pub probe_dist: f64,
    /// Artificial box `‖vars‖_∞ ≤ box_bound` used only by cutting-plane
    /// solves; an active box row at the optimum is reported as unbounded.
    pub box_bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_feas: 1e-9,
            tol_act: 1e-8,
            tol_pivot: 1e-10,
            cut_tol: 1e-8,
            max_cuts: 200,
            cert_residual: 1e-7,
            probe_mu: 1e-6,
            probe_dist: 1e-5,
            box_bound: 1e6,
        }
    }
}

impl Tolerances {
    pub fn lp_options(&self) -> LpOptions {
        LpOptions {
            tol_feas: self.tol_feas,
            tol_pivot: self.tol_pivot,
            ..LpOptions::default()
        }
    }
}

/// Tolerances plus the RNG seed driving randomized probes.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolveOptions {
    pub tol: Tolerances,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: Tolerances::default(),
            seed: 0,
        }
    }
}
