//! Comparison solvers. All of them charge one evaluation per call that
//! computes `f` (and `φ`, when the problem has one, at the same point) and
//! one per Frechet probe, so their traces line up with nlTGCR's.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::jacobian::{frechet_jv, JvProbe};
use crate::linesearch::LineSearchOptions;
use crate::problem::{evaluate, NonlinearProblem};
use crate::solution::Solution;
use crate::trace::{ConvergenceTrace, Mode, TraceRecord};
use crate::vector::{ensure_dim, ensure_finite, Vector};

pub mod anderson;
pub mod broyden;
pub mod lbfgs;
pub mod ncg;
pub mod nesterov;
pub mod newton_krylov;

pub use anderson::{aa_multisecant_check, aa_solve, AaState};
pub use broyden::{broyden1_update, broyden2_solve, BroydenReport, BroydenState};
pub use lbfgs::lbfgs_solve;
pub use ncg::ncg_fr_solve;
pub use nesterov::{estimate_lipschitz, nesterov_solve};
pub use newton_krylov::{eisenstat_walker, newton_krylov_solve, Forcing, OuterReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineOptions {
    pub tol_rel: f64,
    pub max_iters: usize,
    pub linesearch: Option<LineSearchOptions>,
    pub probe: JvProbe,
    /// Stop with [`Error::Divergence`] once `‖f‖ / ‖f₀‖` exceeds this.
    pub divergence: f64,
}

impl Default for BaselineOptions {
    fn default() -> Self {
        Self {
            tol_rel: 1e-10,
            max_iters: 300,
            linesearch: Some(LineSearchOptions::default()),
            probe: JvProbe::default(),
            divergence: 1e8,
        }
    }
}

impl BaselineOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_rel > 0.0) {
            return Err(Error::InvalidOptions("tol_rel must be positive".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidOptions("max_iters must be positive".into()));
        }
        if let Some(ls) = &self.linesearch {
            ls.validate()?;
        }
        self.probe.validate()
    }
}

/// Evaluation counter and trace shared by the baselines.
#[derive(Debug)]
pub(crate) struct Tracker {
    pub trace: ConvergenceTrace,
    pub fevals: usize,
    pub iter: usize,
    pub f0_norm: f64,
    pub x_good: Vector,
    started: Instant,
}

impl Tracker {
    pub fn new(x0: &Vector) -> Self {
        Self {
            trace: ConvergenceTrace::new(),
            fevals: 0,
            iter: 0,
            f0_norm: 0.0,
            x_good: x0.clone(),
            started: Instant::now(),
        }
    }

    pub fn rel(&self, f_norm: f64) -> f64 {
        if self.f0_norm == 0.0 {
            0.0
        } else {
            f_norm / self.f0_norm
        }
    }

    pub fn wrap(&self, e: Error) -> Error {
        if e.is_domain_error() {
            Error::NonFiniteResidual {
                iter: self.iter,
                last_good: Box::new(self.x_good.clone()),
            }
        } else {
            e
        }
    }

    pub fn eval_f<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, x: &Vector) -> Result<Vector> {
        self.fevals += 1;
        evaluate(prob, x).map_err(|e| self.wrap(e))
    }

    pub fn jv<P: NonlinearProblem + ?Sized>(
        &mut self,
        prob: &P,
        x: &Vector,
        p: &Vector,
        f_x: &Vector,
        probe: JvProbe,
    ) -> Result<Vector> {
        let (jv, fe) = frechet_jv(prob, x, p, f_x, probe).map_err(|e| self.wrap(e))?;
        self.fevals += fe;
        Ok(jv)
    }

    /// Appends a record; returns `true` once converged. Errors on divergence.
    pub fn record(&mut self, x: &Vector, f_norm: f64, step: f64, opts: &BaselineOptions) -> Result<bool> {
        let rel = self.rel(f_norm);
        self.trace.append(TraceRecord {
            iter: self.iter,
            fevals: self.fevals,
            resnorm: rel,
            step_size: step,
            mode: Mode::Nonlinear,
            wallclock_s: self.started.elapsed().as_secs_f64(),
        })?;
        if rel > opts.divergence {
            return Err(Error::Divergence { iter: self.iter, relres: rel });
        }
        self.x_good = x.clone();
        Ok(self.f0_norm == 0.0 || rel <= opts.tol_rel)
    }

    pub fn finish<R>(self, x: Vector, converged: bool, reports: Vec<R>) -> Solution<R> {
        Solution {
            x,
            trace: self.trace,
            converged,
            iterations: self.iter,
            fevals: self.fevals,
            restarts: 0,
            switches: Vec::new(),
            reports,
        }
    }
}

pub(crate) fn check_start<P: NonlinearProblem + ?Sized>(prob: &P, x0: &Vector, opts: &BaselineOptions) -> Result<()> {
    opts.validate()?;
    ensure_dim(x0, prob.dim())?;
    ensure_finite(x0, "initial guess")
}

/// `φ`, `∇φ` and `f` at one point.
#[derive(Debug, Clone)]
pub(crate) struct Point {
    pub phi: f64,
    pub grad: Vector,
    pub f: Vector,
}

/// Uses the problem's `φ` when it has one (`∇φ = f / sign`, one evaluation).
/// Otherwise `φ = ½‖f‖²` with `∇φ ≈ J f`, which assumes a symmetric
/// Jacobian and costs a probe.
pub(crate) fn value_grad<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    probe: JvProbe,
    t: &mut Tracker,
) -> Result<Point> {
    let f = t.eval_f(prob, x)?;
    match prob.eval_phi(x) {
        Some(phi) => {
            let phi = phi.map_err(|e| t.wrap(e))?;
            if !phi.is_finite() {
                return Err(t.wrap(Error::NonFinite { what: "objective" }));
            }
            let grad = &f * prob.gradient_sign();
            Ok(Point { phi, grad, f })
        }
        None => {
            let phi = 0.5 * f.norm_squared();
            let grad = if phi == 0.0 {
                Vector::zeros(f.len())
            } else {
                t.jv(prob, x, &f, &f, probe)?
            };
            Ok(Point { phi, grad, f })
        }
    }
}

/// Relative size of `φ` changes treated as roundoff.
pub const PHI_ROUNDOFF: f64 = 1e-6;

/// Backtracking on `φ`: accepts the first `α = α₀ τᵏ` with
/// `φ(x + α d) ≤ φ(x) + c₁ α ⟨∇φ, d⟩`. Close to a minimizer, where `φ`
/// differences drown in roundoff, the derivative form
/// `⟨∇φ(x + α d), d⟩ ≤ (2c₁ - 1) ⟨∇φ(x), d⟩` is accepted instead as long as
/// `φ` has not grown by more than `PHI_ROUNDOFF |φ|` (Hager–Zhang).
/// `None` when the budget runs out.
pub(crate) fn armijo_phi<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    at: &Point,
    d: &Vector,
    alpha0: f64,
    ls: &LineSearchOptions,
    probe: JvProbe,
    t: &mut Tracker,
) -> Result<Option<(f64, Vector, Point)>> {
    let slope = at.grad.dot(d);
    if !(slope < 0.0) {
        return Err(Error::NotDescent { slope: -slope });
    }
    let mut alpha = alpha0;
    for _ in 0..=ls.max_backtracks {
        let x_new = x + d * alpha;
        match value_grad(prob, &x_new, probe, t) {
            Ok(pt) if pt.phi <= at.phi + ls.c1 * alpha * slope => return Ok(Some((alpha, x_new, pt))),
            Ok(pt)
                if pt.phi <= at.phi + PHI_ROUNDOFF * at.phi.abs()
                    && pt.grad.dot(d) <= (2.0 * ls.c1 - 1.0) * slope =>
            {
                return Ok(Some((alpha, x_new, pt)))
            }
            Ok(_) => {}
            Err(Error::NonFiniteResidual { .. }) => {}
            Err(e) => return Err(e),
        }
        alpha *= ls.tau;
    }
    Ok(None)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::FnProblem;

    #[test]
    fn synthesized_objective_matches_half_squared_norm() {
        let prob = FnProblem::new(2, |x| x * 2.0);
        let mut t = Tracker::new(&Vector::zeros(2));
        let x = Vector::from_vec(vec![1.0, -1.0]);
        let pt = value_grad(&prob, &x, JvProbe::default(), &mut t).unwrap();
        assert_eq!(pt.phi, 4.0);
        assert!((pt.grad - &x * 4.0).norm() < 1e-6);
        assert_eq!(t.fevals, 2);
    }

    #[test]
    fn armijo_on_phi_accepts_exact_minimizer() {
        let prob = testing::diagonal_bowl(vec![2.0]);
        let mut t = Tracker::new(&Vector::zeros(1));
        let x = Vector::from_vec(vec![1.0]);
        let at = value_grad(&prob, &x, JvProbe::default(), &mut t).unwrap();
        let d = -&at.grad;
        let (alpha, x_new, _) = armijo_phi(&prob, &x, &at, &d, 0.5, &LineSearchOptions::default(), JvProbe::default(), &mut t)
            .unwrap()
            .unwrap();
        assert_eq!(alpha, 0.5);
        assert_eq!(x_new[0], 0.0);
    }

    #[test]
    fn divergence_is_reported() {
        let mut t = Tracker::new(&Vector::zeros(1));
        t.f0_norm = 1.0;
        let opts = BaselineOptions::default();
        assert!(matches!(
            t.record(&Vector::zeros(1), 1e9, 1.0, &opts),
            Err(Error::Divergence { .. })
        ));
    }
}
