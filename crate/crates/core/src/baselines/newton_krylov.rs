//! Inexact Newton: each outer step solves `J(x) δ = -f(x)` with matrix-free
//! GCR until `‖f + J δ‖ ≤ η ‖f‖` or the inner cap, then backtracks on `‖f‖²`.

use serde::Serialize;

use super::{check_start, BaselineOptions, Tracker};
use crate::error::{Error, Result};
use crate::jacobian::frechet_jv;
use crate::linear::{krylov_core, KrylovExit};
use crate::linesearch::{backtrack, LineSearchOptions};
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::Vector;

pub const EW_GAMMA: f64 = 0.9;
pub const EW_ETA_MAX: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Forcing {
    /// Eisenstat–Walker choice 2 starting from `eta0`.
    EisenstatWalker { eta0: f64 },
    /// Constant forcing term; `Fixed(0.0)` runs every inner solve to the cap.
    Fixed(f64),
}

/// `η = γ (‖f‖ / ‖f_prev‖)²`, kept above `γ η_prev²` when that exceeds 0.1
/// and capped at `η_max`.
pub fn eisenstat_walker(eta_prev: f64, f_norm: f64, f_prev_norm: f64) -> f64 {
    let mut eta = EW_GAMMA * (f_norm / f_prev_norm).powi(2);
    let floor = EW_GAMMA * eta_prev * eta_prev;
    if floor > 0.1 {
        eta = eta.max(floor);
    }
    eta.min(EW_ETA_MAX)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OuterReport {
    pub iter: usize,
    pub eta: f64,
    pub inner_iters: usize,
    /// `‖f + J δ‖ / ‖f‖` at the end of the inner solve.
    pub inner_relres: f64,
    pub capped: bool,
    pub alpha: f64,
}

impl OuterReport {
    /// Whether the forcing inequality holds, or the cap excuses it.
    pub fn forcing_met(&self) -> bool {
        self.capped || self.inner_relres <= self.eta
    }
}

pub fn newton_krylov_solve<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x0: &Vector,
    inner_m: usize,
    forcing: Forcing,
    opts: &BaselineOptions,
) -> Result<Solution<OuterReport>> {
    check_start(prob, x0, opts)?;
    if inner_m == 0 {
        return Err(Error::InvalidOptions("inner_m must be positive".into()));
    }
    let mut eta = match forcing {
        Forcing::EisenstatWalker { eta0 } => eta0,
        Forcing::Fixed(eta) => eta,
    };
    if !(0.0..1.0).contains(&eta) {
        return Err(Error::InvalidOptions("forcing term must lie in [0, 1)".into()));
    }
    let mut t = Tracker::new(x0);
    let mut reports = Vec::new();
    let mut x = x0.clone();
    let mut f = t.eval_f(prob, &x)?;
    t.f0_norm = f.norm();
    let mut step = 0.0;
    let converged = loop {
        if t.record(&x, f.norm(), step, opts)? {
            break true;
        }
        if t.iter == opts.max_iters {
            break false;
        }
        let r = -&f;
        let f_norm = f.norm();
        let mut spent = 0;
        let run = krylov_core(
            |q| {
                let (jv, fe) = frechet_jv(prob, &x, q, &f, opts.probe)?;
                spent += fe;
                Ok(jv)
            },
            &r,
            None,
            eta * f_norm,
            inner_m,
            1e-14,
            false,
        )
        .map_err(|e| t.wrap(e));
        t.fevals += spent;
        let run = run?;
        let delta = run.correction;
        if delta.norm() == 0.0 {
            return Err(Error::Breakdown {
                iter: t.iter,
                resnorm: t.rel(f_norm),
            });
        }
        // ⟨r, J δ⟩ with J δ = r - r_inner
        let slope = r.norm_squared() - r.dot(&run.residual);
        if !(slope > 0.0) {
            return Err(Error::NotDescent { slope });
        }
        let (alpha, x_new, f_new) = match &opts.linesearch {
            Some(ls) => {
                let ls = LineSearchOptions { alpha0: 1.0, ..*ls };
                let res = backtrack(prob, &x, &delta, &r, slope, &ls).map_err(|e| t.wrap(e))?;
                t.fevals += res.fevals;
                (res.alpha, res.x_new, res.f_new)
            }
            None => {
                let x_new = &x + &delta;
                let f_new = t.eval_f(prob, &x_new)?;
                (1.0, x_new, f_new)
            }
        };
        t.iter += 1;
        reports.push(OuterReport {
            iter: t.iter,
            eta,
            inner_iters: run.history.iterations(),
            inner_relres: run.residual.norm() / f_norm,
            capped: run.exit == KrylovExit::MaxIters,
            alpha,
        });
        if let Forcing::EisenstatWalker { .. } = forcing {
            eta = eisenstat_walker(eta, f_new.norm(), f_norm);
        }
        step = alpha * delta.norm();
        x = x_new;
        f = f_new;
    };
    Ok(t.finish(x, converged, reports))
}
