use crate::error::Result;
use crate::options::SolverOptions;
use crate::trace::Mode;
use crate::vector::{angular_distance, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Switch {
    ToLinear,
    ToNonlinear,
    Stay,
}

/// Decides the next residual-update mode from the angle between the
/// evaluated residual `r_nl` and the linear-model residual `r_lin`,
/// `θ = 1 - cos∠(r_nl, r_lin)`. In nonlinear mode, `θ` below the threshold
/// means the model is trustworthy; in linear mode, `θ` at or above it means
/// it no longer is. The caller decides when linear mode is checked.
pub fn adaptive_switch(r_nl: &Vector, r_lin: &Vector, current: Mode, opts: &SolverOptions) -> Result<Switch> {
    let theta = angular_distance(r_nl, r_lin)?;
    Ok(match current {
        Mode::Nonlinear if theta < opts.adaptive_threshold => Switch::ToLinear,
        Mode::Linear if theta >= opts.adaptive_threshold => Switch::ToNonlinear,
        _ => Switch::Stay,
    })
}
