use serde::Serialize;

use crate::trace::{ConvergenceTrace, Mode};
use crate::vector::Vector;

/// A change of residual-update mode, recorded at the iteration it happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModeSwitch {
    pub iter: usize,
    pub to: Mode,
}

/// Result of any solver in the crate.
#[derive(Debug, Clone)]
pub struct Solution<R = ()> {
    pub x: Vector,
    pub trace: ConvergenceTrace,
    pub converged: bool,
    pub iterations: usize,
    pub fevals: usize,
    pub restarts: usize,
    pub switches: Vec<ModeSwitch>,
    /// Per-iteration diagnostics, when the solver was asked for them.
    pub reports: Vec<R>,
}

impl<R> Solution<R> {
    pub fn final_resnorm(&self) -> f64 {
        self.trace.final_resnorm().unwrap_or(f64::NAN)
    }
}
