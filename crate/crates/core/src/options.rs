//! Solver configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobian::{JvMode, JvProbe, DEFAULT_EPS_SCALE};
use crate::linesearch::LineSearchOptions;

/// How the residual is advanced between iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// `r = -f(x)` re-evaluated every iteration.
    Nonlinear,
    /// `r ← r - V y` with the Jacobian frozen at the start of each sweep.
    Linearized,
    /// Switches between the two by the angle between both residuals.
    Adaptive,
}

/// Source of the directional derivative used by the Armijo test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SlopeEstimate {
    /// `⟨r, V y⟩ = ‖y‖²` from the window's linear model; free.
    Model,
    /// One forward-difference probe `⟨r, J d⟩` per search.
    Frechet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub window_m: usize,
    pub tol_rel: f64,
    pub max_iters: usize,
    /// Clear the window every this many iterations.
    pub restart_every: Option<usize>,
    pub variant: Variant,
    pub adaptive_threshold: f64,
    pub adaptive_check_period: usize,
    pub linesearch: Option<LineSearchOptions>,
    pub frechet_eps_scale: f64,
    pub jv_mode: JvMode,
    pub breakdown_tol: f64,
    /// Consecutive breakdown restarts tolerated before giving up.
    pub max_restarts: usize,
    pub slope: SlopeEstimate,
    /// Keep only the newest coefficient of `y`, so the step is `⟨r, v_j⟩ p_j`.
    pub truncate_y: bool,
    /// Record the true residual in linear mode. The extra evaluations are
    /// diagnostic only and are not charged to the trace.
    pub monitor_residual: bool,
    /// Collect a per-iteration property report.
    pub check_invariants: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            window_m: 1,
            tol_rel: 1e-10,
            max_iters: 300,
            restart_every: Some(50),
            variant: Variant::Nonlinear,
            adaptive_threshold: 0.01,
            adaptive_check_period: 10,
            linesearch: Some(LineSearchOptions::default()),
            frechet_eps_scale: DEFAULT_EPS_SCALE,
            jv_mode: JvMode::Frechet,
            breakdown_tol: 1e-14,
            max_restarts: 5,
            slope: SlopeEstimate::Model,
            truncate_y: false,
            monitor_residual: false,
            check_invariants: false,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidOptions(msg.into()));
        if self.window_m == 0 {
            return bad("window_m must be >= 1");
        }
        if !(self.tol_rel > 0.0) {
            return bad("tol_rel must be positive");
        }
        if !(self.adaptive_threshold > 0.0 && self.adaptive_threshold < 2.0) {
            return bad("adaptive_threshold must lie in (0, 2)");
        }
        if self.adaptive_check_period == 0 {
            return bad("adaptive_check_period must be >= 1");
        }
        if self.restart_every == Some(0) {
            return bad("restart_every must be >= 1");
        }
        if !(self.breakdown_tol >= 0.0) {
            return bad("breakdown_tol must be non-negative");
        }
        if let Some(ls) = &self.linesearch {
            ls.validate()?;
        }
        self.probe().validate()
    }

    pub fn probe(&self) -> JvProbe {
        JvProbe {
            mode: self.jv_mode,
            eps_scale: self.frechet_eps_scale,
        }
    }
}
