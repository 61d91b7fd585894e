//! GCR, truncated GCR and conjugate residual for `A x = b`.
//!
//! All three keep directions in normalized form: `v_j = A p_j` with
//! `‖v_j‖ = 1`, so the step is `α_j = ⟨r_j, v_j⟩` and the coefficients are
//! `β_ij = ⟨A r_{j+1}, v_i⟩`. [`KrylovHistory`] records the scale factors
//! needed to recover the unnormalized recurrence.

use std::collections::BTreeMap;
use std::io::Write;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::vector::{ensure_dim, ensure_finite, Vector};
use crate::window::WindowPair;

pub mod verify;

pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, v: &Vector) -> Vector;
    fn is_symmetric(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: DMatrix<f64>,
    symmetric: bool,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<f64>) -> Self {
        assert!(matrix.is_square(), "operator must be square");
        Self { matrix, symmetric: false }
    }

    /// Declares the operator symmetric without checking.
    pub fn symmetric(matrix: DMatrix<f64>) -> Self {
        Self {
            symmetric: true,
            ..Self::new(matrix)
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }
    fn apply(&self, v: &Vector) -> Vector {
        &self.matrix * v
    }
    fn is_symmetric(&self) -> bool {
        self.symmetric
    }
}

impl<L: LinearOperator + ?Sized> LinearOperator for &L {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, v: &Vector) -> Vector {
        (**self).apply(v)
    }
    fn is_symmetric(&self) -> bool {
        (**self).is_symmetric()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Stop once `‖r‖ ≤ tol_rel ‖r₀‖`.
    pub tol_rel: f64,
    pub max_iters: usize,
    pub breakdown_tol: f64,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self {
            tol_rel: 1e-10,
            max_iters: 1000,
            breakdown_tol: 1e-14,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct KrylovHistory {
    /// `r_0 … r_k`; empty for runs that did not keep vectors.
    pub residuals: Vec<Vector>,
    /// `‖r_0‖ … ‖r_k‖`.
    pub norms: Vec<f64>,
    /// Normalized directions `p_j`.
    pub directions: Vec<Vector>,
    /// `v_j = A p_j`, unit norm.
    pub images: Vec<Vector>,
    /// `α_j = ⟨r_j, v_j⟩`.
    pub alphas: Vec<f64>,
    /// `σ_j`: norm of `A p̂_j` for the unnormalized direction `p̂_j = σ_j p_j`.
    pub scales: Vec<f64>,
    /// `‖A r_j‖` before orthogonalization.
    pub image_norms: Vec<f64>,
    /// `(i, j) ↦ β_ij`, the weight of `p_i` when forming `p_{j+1}`.
    pub betas: BTreeMap<(usize, usize), f64>,
    /// Window size, `None` for full orthogonalization.
    pub window: Option<usize>,
}

impl KrylovHistory {
    pub fn iterations(&self) -> usize {
        self.norms.len().saturating_sub(1)
    }

    pub fn resnorms(&self) -> &[f64] {
        &self.norms
    }

    fn log_residual(&mut self, r: &Vector, keep: bool) {
        self.norms.push(r.norm());
        if keep {
            self.residuals.push(r.clone());
        }
    }

    /// Whether every `β_ij` with `i < j + 1` was computed.
    pub fn is_full(&self) -> bool {
        match self.window {
            None => true,
            Some(m) => self.directions.len() <= m,
        }
    }

    /// Step length of the unnormalized recurrence, `α_j / σ_j`.
    pub fn alpha_hat(&self, j: usize) -> f64 {
        self.alphas[j] / self.scales[j]
    }

    /// Unnormalized coefficient `β_ij / σ_i`.
    pub fn beta_hat(&self, i: usize, j: usize) -> Option<f64> {
        self.betas.get(&(i, j)).map(|b| b / self.scales[i])
    }

    /// Unnormalized direction `p̂_j = σ_j p_j`.
    pub fn direction_hat(&self, j: usize) -> Vector {
        &self.directions[j] * self.scales[j]
    }

    /// Writes `iter,resnorm`.
    pub fn write_resnorm_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["iter", "resnorm"])?;
        for (i, r) in self.norms.iter().enumerate() {
            w.write_record([i.to_string(), format!("{r:.16e}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// How the shared iteration ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrylovExit {
    Converged,
    MaxIters,
    Breakdown,
}

/// Output of [`krylov_core`]: the correction `δ` with `A δ ≈ r₀`.
#[derive(Debug, Clone)]
pub struct KrylovRun {
    pub correction: Vector,
    pub residual: Vector,
    pub history: KrylovHistory,
    pub exit: KrylovExit,
    /// Operator applications performed.
    pub matvecs: usize,
}

/// TGCR(m) on `A δ = r₀` from `δ = 0`, with a fallible operator so that
/// matrix-free Jacobians can share it. `window = None` is full GCR.
/// With `record = false` only residual norms are kept in the history.
pub fn krylov_core(
    mut apply: impl FnMut(&Vector) -> Result<Vector>,
    r0: &Vector,
    window: Option<usize>,
    tol_abs: f64,
    max_iters: usize,
    breakdown_tol: f64,
    record: bool,
) -> Result<KrylovRun> {
    let n = r0.len();
    let mut hist = KrylovHistory {
        window,
        ..Default::default()
    };
    let mut pairs = WindowPair::new(window.unwrap_or(usize::MAX))?;
    let mut delta = Vector::zeros(n);
    let mut r = r0.clone();
    let r0_norm = r0.norm();
    let mut matvecs = 0;
    hist.log_residual(&r, record);

    let finish = |delta, r, hist, exit, matvecs| {
        Ok(KrylovRun {
            correction: delta,
            residual: r,
            history: hist,
            exit,
            matvecs,
        })
    };

    if r0_norm <= tol_abs || r0_norm == 0.0 {
        return finish(delta, r, hist, KrylovExit::Converged, matvecs);
    }
    for j in 0..max_iters {
        // new direction from the current residual
        let ar = apply(&r)?;
        matvecs += 1;
        ensure_finite(&ar, "operator image")?;
        let oldest = pairs.oldest_index().unwrap_or(0);
        let o = pairs.orthogonalize(r.clone(), ar);
        let lucky = r.norm() <= breakdown_tol * r0_norm;
        if o.norm == 0.0 || o.norm <= breakdown_tol * o.raw_norm || lucky {
            return finish(delta, r, hist, KrylovExit::Breakdown, matvecs);
        }
        if record && j > 0 {
            for (k, b) in o.betas.iter().enumerate() {
                hist.betas.insert((oldest + k, j - 1), *b);
            }
        }
        hist.image_norms.push(o.raw_norm);
        hist.scales.push(o.norm);
        let (p, v) = o.normalized();
        if record {
            hist.directions.push(p.clone());
            hist.images.push(v.clone());
        }
        pairs.push(p, v)?;

        let (p, v) = pairs.last().expect("just pushed");
        let alpha = r.dot(v);
        hist.alphas.push(alpha);
        delta.axpy(alpha, p, 1.0);
        r.axpy(-alpha, v, 1.0);
        hist.log_residual(&r, record);
        if r.norm() <= tol_abs {
            return finish(delta, r, hist, KrylovExit::Converged, matvecs);
        }
    }
    finish(delta, r, hist, KrylovExit::MaxIters, matvecs)
}

fn check_inputs<A: LinearOperator + ?Sized>(a: &A, b: &Vector, x0: &Vector) -> Result<()> {
    ensure_dim(b, a.dim())?;
    ensure_dim(x0, a.dim())?;
    ensure_finite(b, "right-hand side")?;
    ensure_finite(x0, "initial guess")
}

fn tgcr_impl<A: LinearOperator + ?Sized>(
    a: &A,
    b: &Vector,
    x0: &Vector,
    window: Option<usize>,
    opts: &KrylovOptions,
) -> Result<(Vector, KrylovHistory)> {
    check_inputs(a, b, x0)?;
    if window == Some(0) {
        return Err(Error::InvalidOptions("window must be >= 1".into()));
    }
    let r0 = b - a.apply(x0);
    let tol = opts.tol_rel * r0.norm();
    let run = krylov_core(|v| Ok(a.apply(v)), &r0, window, tol, opts.max_iters, opts.breakdown_tol, true)?;
    let x = x0 + &run.correction;
    if run.exit == KrylovExit::Breakdown && run.residual.norm() > tol {
        return Err(Error::Breakdown {
            iter: run.history.iterations(),
            resnorm: run.residual.norm(),
        });
    }
    Ok((x, run.history))
}

/// Full GCR. The history keeps every `β_ij`.
pub fn gcr_solve<A: LinearOperator + ?Sized>(
    a: &A,
    b: &Vector,
    x0: &Vector,
    opts: &KrylovOptions,
) -> Result<(Vector, KrylovHistory)> {
    tgcr_impl(a, b, x0, None, opts)
}

/// GCR orthogonalizing each direction against the previous `m` only.
pub fn tgcr_solve<A: LinearOperator + ?Sized>(
    a: &A,
    b: &Vector,
    x0: &Vector,
    m: usize,
    opts: &KrylovOptions,
) -> Result<(Vector, KrylovHistory)> {
    tgcr_impl(a, b, x0, Some(m), opts)
}

/// Conjugate residual: the two-term recurrence for symmetric `A`.
pub fn cr_solve<A: LinearOperator + ?Sized>(
    a: &A,
    b: &Vector,
    x0: &Vector,
    opts: &KrylovOptions,
) -> Result<(Vector, KrylovHistory)> {
    if !a.is_symmetric() {
        return Err(Error::NonSymmetric);
    }
    check_inputs(a, b, x0)?;
    let mut hist = KrylovHistory {
        window: Some(1),
        ..Default::default()
    };
    let mut x = x0.clone();
    let mut r = b - a.apply(x0);
    let tol = opts.tol_rel * r.norm();
    hist.log_residual(&r, true);
    if r.norm() <= tol || r.norm() == 0.0 {
        return Ok((x, hist));
    }
    let mut ar = a.apply(&r);
    let mut p = r.clone();
    let mut ap = ar.clone();
    let mut rho = r.dot(&ar);
    for j in 0..opts.max_iters {
        let ap_norm = ap.norm();
        if ap_norm <= opts.breakdown_tol * hist.norms[0] || ap_norm == 0.0 {
            return Err(Error::Breakdown {
                iter: j,
                resnorm: r.norm(),
            });
        }
        hist.directions.push(&p / ap_norm);
        hist.images.push(&ap / ap_norm);
        hist.scales.push(ap_norm);
        hist.image_norms.push(ar.norm());
        let alpha = rho / (ap_norm * ap_norm);
        hist.alphas.push(alpha * ap_norm);
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &ap, 1.0);
        hist.log_residual(&r, true);
        if r.norm() <= tol {
            break;
        }
        ar = a.apply(&r);
        let rho_new = r.dot(&ar);
        if rho == 0.0 {
            return Err(Error::Breakdown {
                iter: j,
                resnorm: r.norm(),
            });
        }
        let beta = rho_new / rho;
        rho = rho_new;
        p = &r + &p * beta;
        ap = &ar + &ap * beta;
    }
    Ok((x, hist))
}
