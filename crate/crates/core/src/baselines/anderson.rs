//! Anderson acceleration of `g(x) = x + β f(x)`.
//!
//! With `X = [Δx]` and `F = [Δf]` over the last `m` steps,
//! `θ = argmin ‖f - F θ‖` and `x⁺ = x + β f - (X + β F) θ`.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::{check_start, BaselineOptions, Tracker};
use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::{columns, Vector};

/// Largest condition number of the `F` factor tolerated before the oldest
/// column is dropped.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct AaState {
    pub m: usize,
    pub beta: f64,
    dx: VecDeque<Vector>,
    df: VecDeque<Vector>,
    prev: Option<(Vector, Vector)>,
    /// Columns discarded for conditioning so far.
    pub dropped: usize,
}

impl AaState {
    pub fn new(m: usize, beta: f64) -> Self {
        Self {
            m,
            beta,
            dx: VecDeque::new(),
            df: VecDeque::new(),
            prev: None,
            dropped: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }

    pub fn x_matrix(&self) -> DMatrix<f64> {
        columns(self.dx.iter(), self.dim())
    }

    pub fn f_matrix(&self) -> DMatrix<f64> {
        columns(self.df.iter(), self.dim())
    }

    fn dim(&self) -> usize {
        self.prev.as_ref().map_or(0, |(x, _)| x.len())
    }

    /// Adds a column pair directly, evicting the oldest beyond `m`.
    pub fn push(&mut self, dx: Vector, df: Vector) {
        if self.m == 0 {
            return;
        }
        if self.dx.len() == self.m {
            self.dx.pop_front();
            self.df.pop_front();
        }
        self.dx.push_back(dx);
        self.df.push_back(df);
    }

    /// Takes the evaluated pair `(x, f(x))` and returns the next iterate.
    pub fn update(&mut self, x: &Vector, f: &Vector) -> Vector {
        if let Some((xp, fp)) = self.prev.take() {
            self.push(x - xp, f - fp);
        }
        self.prev = Some((x.clone(), f.clone()));
        let mut next = x + f * self.beta;
        if let Some(theta) = self.coefficients(f) {
            for ((dx, df), t) in self.dx.iter().zip(&self.df).zip(theta.iter()) {
                next.axpy(-t, dx, 1.0);
                next.axpy(-t * self.beta, df, 1.0);
            }
        }
        next
    }

    /// `argmin ‖f - F θ‖` by QR, dropping the oldest columns while `F` is
    /// wider than tall or too ill-conditioned.
    fn coefficients(&mut self, f: &Vector) -> Option<Vector> {
        while !self.df.is_empty() {
            let fm = columns(self.df.iter(), f.len());
            let qr = fm.qr();
            let r = qr.r();
            let sv = r.singular_values();
            let smax = sv.max();
            let smin = sv.min();
            if self.df.len() <= f.len() && smin > 0.0 && smax / smin <= MAX_CONDITION {
                let rhs = qr.q().tr_mul(f);
                return r.solve_upper_triangular(&rhs);
            }
            self.dx.pop_front();
            self.df.pop_front();
            self.dropped += 1;
        }
        None
    }
}

/// `max |G F - X| / max |X|` with `G = -βI + (X + βF)(FᵀF)⁻¹Fᵀ`, applied
/// column by column so that `G` is never formed.
pub fn aa_multisecant_check(state: &AaState) -> Result<f64> {
    if state.is_empty() {
        return Ok(0.0);
    }
    let x = state.x_matrix();
    let f = state.f_matrix();
    let gram = f.tr_mul(&f);
    let chol = gram.cholesky().ok_or(Error::SingularGram)?;
    let mixed = &x + &f * state.beta;
    let coeff = chol.solve(&f.tr_mul(&f));
    let gf = &f * (-state.beta) + mixed * coeff;
    let scale = x.amax().max(f64::MIN_POSITIVE);
    Ok((gf - &x).amax() / scale)
}

/// `m = 0` is the plain fixed-point iteration `x ← x + β f(x)`.
pub fn aa_solve<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x0: &Vector,
    m: usize,
    beta: f64,
    opts: &BaselineOptions,
) -> Result<Solution> {
    check_start(prob, x0, opts)?;
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidOptions("beta must be finite and non-zero".into()));
    }
    let mut t = Tracker::new(x0);
    let mut state = AaState::new(m, beta);
    let mut x = x0.clone();
    let mut f = t.eval_f(prob, &x)?;
    t.f0_norm = f.norm();
    let mut step = 0.0;
    loop {
        if t.record(&x, f.norm(), step, opts)? {
            return Ok(t.finish(x, true, Vec::new()));
        }
        if t.iter == opts.max_iters {
            return Ok(t.finish(x, false, Vec::new()));
        }
        let next = state.update(&x, &f);
        step = (&next - &x).norm();
        x = next;
        f = t.eval_f(prob, &x)?;
        t.iter += 1;
    }
}
