//! nlTGCR(m): truncated GCR carried over to `f(x) = 0`.
//!
//! The iteration keeps a window of pairs `(p_i, v_i)` with `v_i ≈ J(x_i) p_i`
//! orthonormal, takes `y = Vᵀr` (the least-squares fit of `r = -f(x)` in
//! `span(V)`), moves along `d = P y`, and adds the pair built from the new
//! residual. The three variants differ only in how the residual is
//! advanced:
//!
//! * [`Variant::Nonlinear`]: `r = -f(x)` every step, two evaluations per step.
//! * [`Variant::Linearized`]: `r ← r - V y` with `J` frozen at the start of
//!   the sweep, one evaluation per step. This is an inexact Newton method
//!   with a TGCR inner solver.
//! * [`Variant::Adaptive`]: starts nonlinear and moves between the two by the
//!   angle between the evaluated and the predicted residual.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::jacobian::{descent_check, frechet_jv};
use crate::linesearch::{backtrack, backtrack_linear, update_alpha0, LineSearchOptions};
use crate::options::{SlopeEstimate, SolverOptions, Variant};
use crate::problem::{evaluate, NonlinearProblem};
use crate::solution::{ModeSwitch, Solution};
use crate::trace::{ConvergenceTrace, Mode, TraceRecord};
use crate::vector::{ensure_dim, ensure_finite, Vector};
use crate::window::WindowPair;

pub mod adaptive;
pub mod diagnostics;
pub mod secant;

pub use adaptive::{adaptive_switch, Switch};
pub use diagnostics::IterationReport;
pub use secant::{frobenius_minimality_margin, secant_property_check, SecantReport};

pub type NltgcrSolution = Solution<IterationReport>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepStatus {
    Continue,
    Converged,
}

/// The point where linear mode freezes the Jacobian, with `f` there.
#[derive(Debug, Clone)]
struct Sweep {
    x: Vector,
    f: Vector,
}

#[derive(Debug, Clone)]
pub struct NltgcrState {
    pub x: Vector,
    /// `-f(x)` in nonlinear mode, the linear-model estimate in linear mode.
    pub r: Vector,
    pub window: WindowPair,
    pub mode: Mode,
    pub iter: usize,
    pub fevals: usize,
    pub trace: ConvergenceTrace,
    pub switches: Vec<ModeSwitch>,
    pub restarts: usize,
    pub reports: Vec<IterationReport>,
    sweep: Option<Sweep>,
    f0_norm: f64,
    alpha0: f64,
    since_linear: usize,
    since_restart: usize,
    breakdowns: usize,
    /// Bumped whenever the window is cleared.
    generation: usize,
    /// `r_j - V_j y_j` from the previous step, tagged with its generation.
    r_tilde: Option<(usize, Vector)>,
    started: Instant,
}

impl NltgcrState {
    /// Evaluates `f(x₀)` and, unless it already vanishes, builds the first pair.
    pub fn new<P: NonlinearProblem + ?Sized>(prob: &P, x0: &Vector, opts: &SolverOptions) -> Result<Self> {
        opts.validate()?;
        ensure_dim(x0, prob.dim())?;
        ensure_finite(x0, "initial guess")?;
        let f0 = evaluate(prob, x0)?;
        let f0_norm = f0.norm();
        let mode = match opts.variant {
            Variant::Linearized => Mode::Linear,
            Variant::Nonlinear | Variant::Adaptive => Mode::Nonlinear,
        };
        let mut st = Self {
            x: x0.clone(),
            r: -&f0,
            window: WindowPair::new(opts.window_m)?,
            mode,
            iter: 0,
            fevals: 1,
            trace: ConvergenceTrace::new(),
            switches: Vec::new(),
            restarts: 0,
            reports: Vec::new(),
            sweep: (mode == Mode::Linear).then(|| Sweep { x: x0.clone(), f: f0 }),
            f0_norm,
            alpha0: opts.linesearch.map_or(1.0, |ls| ls.alpha0),
            since_linear: 0,
            since_restart: 0,
            breakdowns: 0,
            generation: 0,
            r_tilde: None,
            started: Instant::now(),
        };
        if f0_norm == 0.0 {
            st.record(0.0, 0.0, mode)?;
            return Ok(st);
        }
        st.add_pair(prob, opts)?;
        st.record(1.0, 0.0, mode)?;
        Ok(st)
    }

    pub fn relative_residual(&self) -> f64 {
        if self.f0_norm == 0.0 {
            0.0
        } else {
            self.r.norm() / self.f0_norm
        }
    }

    pub fn initial_residual_norm(&self) -> f64 {
        self.f0_norm
    }

    /// Point at which linear mode evaluates Jacobian products.
    pub fn sweep_origin(&self) -> Option<&Vector> {
        self.sweep.as_ref().map(|s| &s.x)
    }

    fn converged(&self, rel: f64, opts: &SolverOptions) -> bool {
        self.f0_norm == 0.0 || rel <= opts.tol_rel
    }

    pub fn is_converged(&self, opts: &SolverOptions) -> bool {
        self.mode == Mode::Nonlinear && self.converged(self.relative_residual(), opts)
            || self.f0_norm == 0.0
    }

    fn record(&mut self, resnorm: f64, step_size: f64, mode: Mode) -> Result<()> {
        self.trace.append(TraceRecord {
            iter: self.iter,
            fevals: self.fevals,
            resnorm,
            step_size,
            mode,
            wallclock_s: self.started.elapsed().as_secs_f64(),
        })
    }

    fn eval<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, x: &Vector) -> Result<Vector> {
        self.fevals += 1;
        evaluate(prob, x).map_err(|e| self.non_finite(e))
    }

    fn non_finite(&self, e: Error) -> Error {
        if e.is_domain_error() {
            Error::NonFiniteResidual {
                iter: self.iter,
                last_good: Box::new(self.x.clone()),
            }
        } else {
            e
        }
    }

    fn clear_window(&mut self) {
        self.window.clear();
        self.generation += 1;
        self.since_restart = 0;
    }

    /// `y = Vᵀr`, or only its newest entry when truncated.
    fn coefficients(&self, opts: &SolverOptions) -> Vec<f64> {
        if opts.truncate_y {
            let mut y = vec![0.0; self.window.len()];
            if let Some((_, v)) = self.window.last() {
                *y.last_mut().unwrap() = v.dot(&self.r);
            }
            y
        } else {
            self.window.vt(&self.r)
        }
    }

    /// Builds `(p, v) = (r, J r)` at the current Jacobian point, orthogonalizes
    /// it against the window and stores it. On breakdown the window is
    /// cleared and the raw pair is stored instead. Returns the stored `v`.
    fn add_pair<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, opts: &SolverOptions) -> Result<Vector> {
        let (at, f_at) = match (&self.sweep, self.mode) {
            (Some(s), Mode::Linear) => (s.x.clone(), s.f.clone()),
            _ => (self.x.clone(), -&self.r),
        };
        let p = self.r.clone();
        let (v, fe) = frechet_jv(prob, &at, &p, &f_at, opts.probe()).map_err(|e| self.non_finite(e))?;
        self.fevals += fe;
        let o = self.window.orthogonalize(p.clone(), v.clone());
        let broke = o.norm == 0.0 || o.norm <= opts.breakdown_tol * o.raw_norm;
        if !broke {
            let (p, v) = o.normalized();
            self.window.push(p, v.clone())?;
            self.breakdowns = 0;
            return Ok(v);
        }
        self.breakdowns += 1;
        self.restarts += 1;
        if o.raw_norm == 0.0 || self.breakdowns > opts.max_restarts {
            return Err(Error::Breakdown {
                iter: self.iter,
                resnorm: self.relative_residual(),
            });
        }
        self.clear_window();
        let s = 1.0 / o.raw_norm;
        let v = v * s;
        self.window.push(p * s, v.clone())?;
        Ok(v)
    }

    /// Restart without moving: clear the window and rebuild from `r`.
    fn restart_here<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, opts: &SolverOptions) -> Result<()> {
        self.breakdowns += 1;
        self.restarts += 1;
        if self.breakdowns > opts.max_restarts {
            return Err(Error::Breakdown {
                iter: self.iter,
                resnorm: self.relative_residual(),
            });
        }
        if self.mode == Mode::Linear {
            let f = self.eval(prob, &self.x.clone())?;
            self.r = -&f;
            self.sweep = Some(Sweep { x: self.x.clone(), f });
        }
        self.clear_window();
        let breakdowns = self.breakdowns;
        self.add_pair(prob, opts)?;
        self.breakdowns = breakdowns;
        Ok(())
    }

    /// Moves along `d` with `r` recomputed from `f`. `None` means no
    /// acceptable point was found.
    fn move_nonlinear<P: NonlinearProblem + ?Sized>(
        &mut self,
        prob: &P,
        opts: &SolverOptions,
        d: &Vector,
        model_slope: f64,
    ) -> Result<Option<f64>> {
        let Some(ls) = &opts.linesearch else {
            let x_new = &self.x + d;
            let f_new = self.eval(prob, &x_new)?;
            self.x = x_new;
            self.r = -f_new;
            return Ok(Some(1.0));
        };
        let slope = match opts.slope {
            SlopeEstimate::Model => model_slope,
            SlopeEstimate::Frechet => {
                let (s, fe) = descent_check(prob, &self.x, &self.r, d, opts.probe()).map_err(|e| self.non_finite(e))?;
                self.fevals += fe;
                s
            }
        };
        if !(slope > 0.0) {
            return Ok(None);
        }
        let ls_opts = LineSearchOptions {
            alpha0: self.alpha0,
            ..*ls
        };
        let res = backtrack(prob, &self.x, d, &self.r, slope, &ls_opts).map_err(|e| self.non_finite(e))?;
        self.fevals += res.fevals;
        self.alpha0 = update_alpha0(&ls_opts, res.steps).alpha0;
        if !res.accepted && res.f_new.norm() >= self.r.norm() {
            return Ok(None);
        }
        self.x = res.x_new;
        self.r = -res.f_new;
        Ok(Some(res.alpha))
    }

    /// Moves along `d` with `r ← r - α w`, no evaluations.
    fn move_linear(&mut self, opts: &SolverOptions, d: &Vector, w: &Vector, slope: f64) -> Result<f64> {
        let alpha = match &opts.linesearch {
            Some(ls) if slope > 0.0 => {
                let ls_opts = LineSearchOptions {
                    alpha0: self.alpha0,
                    ..*ls
                };
                let (alpha, steps, _) = backtrack_linear(&self.r, w, slope, &ls_opts)?;
                self.alpha0 = update_alpha0(&ls_opts, steps).alpha0;
                alpha
            }
            _ => 1.0,
        };
        self.x.axpy(alpha, d, 1.0);
        self.r.axpy(-alpha, w, 1.0);
        Ok(alpha)
    }

    fn enter_linear(&mut self) {
        self.mode = Mode::Linear;
        self.since_linear = 0;
        self.sweep = Some(Sweep {
            x: self.x.clone(),
            f: -&self.r,
        });
        self.switches.push(ModeSwitch {
            iter: self.iter,
            to: Mode::Linear,
        });
    }

    /// Nonlinear-mode step. Errors if the state is in linear mode.
    pub fn step_nonlinear<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, opts: &SolverOptions) -> Result<StepStatus> {
        if self.mode != Mode::Nonlinear {
            return Err(Error::InvalidOptions("state is in linear mode".into()));
        }
        self.step(prob, opts)
    }

    /// Linear-mode step. Errors if the state is in nonlinear mode.
    pub fn step_linearized<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, opts: &SolverOptions) -> Result<StepStatus> {
        if self.mode != Mode::Linear {
            return Err(Error::InvalidOptions("state is in nonlinear mode".into()));
        }
        self.step(prob, opts)
    }

    /// One outer iteration in the current mode.
    pub fn step<P: NonlinearProblem + ?Sized>(&mut self, prob: &P, opts: &SolverOptions) -> Result<StepStatus> {
        if self.window.is_empty() {
            return Err(Error::InvalidOptions("empty window; the state has converged".into()));
        }
        let y = self.coefficients(opts);
        let d = self.window.combine_p(&y);
        let w = self.window.combine_v(&y);
        let r_prev = self.r.clone();
        let r_norm = r_prev.norm();
        let r_tilde = &r_prev - &w;
        let generation = self.generation;
        let mut report = opts.check_invariants.then(|| self.report_before(&y, &r_tilde, r_norm, opts));

        if d.norm() == 0.0 {
            self.restart_here(prob, opts)?;
            return Ok(StepStatus::Continue);
        }
        let slope: f64 = y.iter().map(|c| c * c).sum();
        let mode = self.mode;
        let alpha = match mode {
            Mode::Nonlinear => match self.move_nonlinear(prob, opts, &d, slope)? {
                Some(a) => a,
                None => {
                    self.restart_here(prob, opts)?;
                    return Ok(StepStatus::Continue);
                }
            },
            Mode::Linear => self.move_linear(opts, &d, &w, slope)?,
        };
        self.iter += 1;
        self.since_restart += 1;
        let r_lin = &r_prev - &w * alpha;
        if let Some(rep) = report.as_mut() {
            rep.model_deviation = (&r_lin - &self.r).norm() / r_norm;
        }

        // residual bookkeeping and mode changes
        let mut recorded = None;
        match mode {
            Mode::Nonlinear => {
                let rel = self.relative_residual();
                if self.converged(rel, opts) {
                    self.record(rel, alpha, mode)?;
                    self.push_report(report);
                    return Ok(StepStatus::Converged);
                }
                if opts.variant == Variant::Adaptive && r_lin.norm() > 0.0 {
                    if let Switch::ToLinear = adaptive_switch(&self.r, &r_lin, Mode::Nonlinear, opts)? {
                        self.enter_linear();
                    }
                }
            }
            Mode::Linear => {
                self.since_linear += 1;
                let estimate_done = self.converged(self.relative_residual(), opts);
                let check_due =
                    opts.variant == Variant::Adaptive && self.since_linear % opts.adaptive_check_period == 0;
                if estimate_done || check_due {
                    let f = self.eval(prob, &self.x.clone())?;
                    let r_nl = -&f;
                    let rel = r_nl.norm() / self.f0_norm;
                    recorded = Some(rel);
                    if self.converged(rel, opts) {
                        self.r = r_nl;
                        self.record(rel, alpha, mode)?;
                        self.push_report(report);
                        return Ok(StepStatus::Converged);
                    }
                    let leave = estimate_done
                        || self.r.norm() == 0.0
                        || adaptive_switch(&r_nl, &self.r, Mode::Linear, opts)? == Switch::ToNonlinear;
                    if leave {
                        self.r = r_nl;
                        if opts.variant == Variant::Adaptive {
                            self.mode = Mode::Nonlinear;
                            self.sweep = None;
                            self.switches.push(ModeSwitch {
                                iter: self.iter,
                                to: Mode::Nonlinear,
                            });
                        } else {
                            self.sweep = Some(Sweep { x: self.x.clone(), f });
                        }
                        self.clear_window();
                    }
                }
            }
        }
        if let Some(k) = opts.restart_every {
            if self.since_restart >= k {
                if self.mode == Mode::Linear && recorded.is_none() {
                    let f = self.eval(prob, &self.x.clone())?;
                    self.r = -&f;
                    recorded = Some(self.relative_residual());
                    self.sweep = Some(Sweep { x: self.x.clone(), f });
                }
                self.clear_window();
                self.restarts += 1;
            }
        }

        let resnorm = match (mode, recorded) {
            (Mode::Linear, Some(rel)) => rel,
            (Mode::Linear, None) if opts.monitor_residual => evaluate(prob, &self.x)?.norm() / self.f0_norm,
            _ => self.relative_residual(),
        };
        self.record(resnorm, alpha, mode)?;

        let v_new = self.add_pair(prob, opts)?;
        if let Some(rep) = report.as_mut() {
            rep.projection = (self.generation == generation)
                .then(|| diagnostics::projection(&v_new, &r_tilde, &r_prev));
            rep.window_defect = self.window.orthonormality_defect();
        }
        self.r_tilde = Some((generation, r_tilde));
        self.push_report(report);
        Ok(StepStatus::Continue)
    }

    fn report_before(&self, y: &[f64], r_tilde: &Vector, r_norm: f64, opts: &SolverOptions) -> IterationReport {
        let sec = secant_property_check(&self.window, self.iter as u64);
        let deviation = match &self.r_tilde {
            Some((g, prev)) if *g == self.generation => Some(diagnostics::deviation(&self.window, &self.r, prev)),
            _ => None,
        };
        IterationReport {
            iter: self.iter,
            mode: self.mode,
            orthogonality: diagnostics::orthogonality(&self.window, r_tilde, r_norm),
            projection: None,
            deviation,
            secant: sec.secant,
            no_change: sec.no_change,
            least_squares: if opts.truncate_y {
                0.0
            } else {
                diagnostics::least_squares(&self.window, &self.r, y)
            },
            model_deviation: 0.0,
            window_defect: self.window.orthonormality_defect(),
        }
    }

    fn push_report(&mut self, report: Option<IterationReport>) {
        if let Some(r) = report {
            self.reports.push(r);
        }
    }

    pub fn into_solution(self, converged: bool) -> NltgcrSolution {
        Solution {
            x: self.x,
            trace: self.trace,
            converged,
            iterations: self.iter,
            fevals: self.fevals,
            restarts: self.restarts,
            switches: self.switches,
            reports: self.reports,
        }
    }
}

/// Runs nlTGCR until `‖f(x)‖ ≤ tol_rel ‖f(x₀)‖` or `max_iters` steps.
pub fn nltgcr_solve<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x0: &Vector,
    opts: &SolverOptions,
) -> Result<NltgcrSolution> {
    let mut st = NltgcrState::new(prob, x0, opts)?;
    let mut converged = st.is_converged(opts);
    while !converged && st.iter < opts.max_iters {
        converged = st.step(prob, opts)? == StepStatus::Converged;
    }
    Ok(st.into_solution(converged))
}

/// Per-iteration reports as a JSON array.
pub fn reports_json(reports: &[IterationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}
