//! Broyden's second ("bad") method: `G ≈ J⁻¹` updated by
//! `G⁺ = G + (Δx - G Δf) Δfᵀ / (Δfᵀ Δf)`, stored as `G = -βI + Σ uₖ wₖᵀ`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{check_start, BaselineOptions, Tracker};
use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BroydenReport {
    pub iter: usize,
    /// `‖G⁺Δf - Δx‖ / ‖Δx‖`.
    pub secant: f64,
    /// `‖G⁺q - G q‖ / ‖G q‖` for a random `q ⟂ Δf`.
    pub no_change: f64,
}

#[derive(Debug, Clone)]
pub struct BroydenState {
    pub beta: f64,
    us: Vec<Vector>,
    ws: Vec<Vector>,
}

impl BroydenState {
    pub fn new(beta: f64) -> Self {
        Self {
            beta,
            us: Vec::new(),
            ws: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.us.len()
    }

    pub fn apply(&self, q: &Vector) -> Vector {
        let mut out = q * (-self.beta);
        for (u, w) in self.us.iter().zip(&self.ws) {
            out.axpy(w.dot(q), u, 1.0);
        }
        out
    }

    /// Rank-one update; skipped (returning `None`) when `Δf = 0`.
    pub fn update(&mut self, dx: &Vector, df: &Vector, seed: u64) -> Option<BroydenReport> {
        let nf = df.norm_squared();
        if nf == 0.0 {
            return None;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = Vector::from_fn(df.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        q.axpy(-q.dot(df) / nf, df, 1.0);
        let gq_old = self.apply(&q);

        let u = (dx - self.apply(df)) / nf;
        self.us.push(u);
        self.ws.push(df.clone());

        let secant = (self.apply(df) - dx).norm() / dx.norm().max(f64::MIN_POSITIVE);
        let no_change = (self.apply(&q) - &gq_old).norm() / gq_old.norm().max(f64::MIN_POSITIVE);
        Some(BroydenReport {
            iter: 0,
            secant,
            no_change,
        })
    }

    pub fn dense(&self, n: usize) -> DMatrix<f64> {
        let mut g = DMatrix::identity(n, n) * (-self.beta);
        for (u, w) in self.us.iter().zip(&self.ws) {
            g += u * w.transpose();
        }
        g
    }
}

/// Broyden's first method updates the Jacobian itself:
/// `J⁺ = J + (Δf - J Δx) Δxᵀ / (Δxᵀ Δx)`.
pub fn broyden1_update(j: &DMatrix<f64>, dx: &Vector, df: &Vector) -> Result<DMatrix<f64>> {
    let nx = dx.norm_squared();
    if nx == 0.0 {
        return Err(Error::ZeroDirection);
    }
    Ok(j + (df - j * dx) * dx.transpose() / nx)
}

/// `x⁺ = x - G f(x)` starting from `G₀ = -βI`.
pub fn broyden2_solve<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x0: &Vector,
    beta: f64,
    opts: &BaselineOptions,
) -> Result<Solution<BroydenReport>> {
    check_start(prob, x0, opts)?;
    if beta == 0.0 || !beta.is_finite() {
        return Err(Error::InvalidOptions("beta must be finite and non-zero".into()));
    }
    let mut t = Tracker::new(x0);
    let mut g = BroydenState::new(beta);
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
        let dx = -g.apply(&f);
        step = dx.norm();
        let x_new = &x + &dx;
        let f_new = t.eval_f(prob, &x_new)?;
        t.iter += 1;
        if let Some(mut rep) = g.update(&dx, &(&f_new - &f), t.iter as u64) {
            rep.iter = t.iter;
            reports.push(rep);
        }
        x = x_new;
        f = f_new;
    };
    Ok(t.finish(x, converged, reports))
}
