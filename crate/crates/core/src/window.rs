//! Sliding window of direction pairs `(p_i, v_i)` with `v_i` the (normalized)
//! Jacobian image of `p_i`.
//!
//! Columns are kept oldest to newest. The window also owns the modified
//! Gram-Schmidt kernel shared by the linear and nonlinear solvers, so that
//! both orthogonalize a candidate pair in exactly the same way.

use std::collections::VecDeque;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::vector::{columns, Vector};

const NORMALIZATION_TOL: f64 = 1e-10;
const REORTH_TOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct WindowPair {
    p_cols: VecDeque<Vector>,
    v_cols: VecDeque<Vector>,
    capacity: usize,
    /// Global index the next pushed pair receives.
    next_index: usize,
}

/// A candidate pair after orthogonalization against the window, before scaling.
#[derive(Debug, Clone)]
pub struct Orthogonalized {
    pub p: Vector,
    pub v: Vector,
    /// Coefficients against the stored pairs, oldest first.
    pub betas: Vec<f64>,
    /// `‖v‖` before orthogonalization.
    pub raw_norm: f64,
    /// `‖v‖` after orthogonalization.
    pub norm: f64,
}

impl Orthogonalized {
    /// Scales both vectors by `1/‖v‖`.
    pub fn normalized(self) -> (Vector, Vector) {
        let s = 1.0 / self.norm;
        (self.p * s, self.v * s)
    }
}

impl WindowPair {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::InvalidOptions("window capacity must be >= 1".into()));
        }
        Ok(Self {
            p_cols: VecDeque::with_capacity(capacity.min(1024)),
            v_cols: VecDeque::with_capacity(capacity.min(1024)),
            capacity,
            next_index: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.p_cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_cols.is_empty()
    }

    /// `j_m = max{0, j - m + 1}` for the newest stored index `j`.
    pub fn oldest_index(&self) -> Option<usize> {
        if self.is_empty() {
            None
        } else {
            Some(self.next_index - self.len())
        }
    }

    /// Global index of the newest stored pair.
    pub fn newest_index(&self) -> Option<usize> {
        self.next_index.checked_sub(1).filter(|_| !self.is_empty())
    }

    pub fn p(&self, i: usize) -> &Vector {
        &self.p_cols[i]
    }

    pub fn v(&self, i: usize) -> &Vector {
        &self.v_cols[i]
    }

    pub fn p_cols(&self) -> impl Iterator<Item = &Vector> {
        self.p_cols.iter()
    }

    pub fn v_cols(&self) -> impl Iterator<Item = &Vector> {
        self.v_cols.iter()
    }

    pub fn last(&self) -> Option<(&Vector, &Vector)> {
        self.p_cols.back().zip(self.v_cols.back())
    }

    /// Drops every stored pair. Global indexing continues.
    pub fn clear(&mut self) {
        self.p_cols.clear();
        self.v_cols.clear();
    }

    /// Appends a normalized pair, evicting the oldest pair when full.
    pub fn push(&mut self, p: Vector, v: Vector) -> Result<()> {
        if p.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: p.len(),
                found: v.len(),
            });
        }
        if let Some(first) = self.v_cols.front() {
            if first.len() != v.len() {
                return Err(Error::DimensionMismatch {
                    expected: first.len(),
                    found: v.len(),
                });
            }
        }
        let norm = v.norm();
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        if self.len() == self.capacity {
            self.p_cols.pop_front();
            self.v_cols.pop_front();
        }
        self.p_cols.push_back(p);
        self.v_cols.push_back(v);
        self.next_index += 1;
        debug_assert!(
            self.orthonormality_defect() <= 1e-10,
            "window lost orthonormality: {:e}",
            self.orthonormality_defect()
        );
        Ok(())
    }

    /// Modified Gram-Schmidt of `(p, v)` against the stored pairs, with one
    /// extra pass when the first one leaves `‖Vᵀv‖ > 1e-8 ‖v‖`.
    pub fn orthogonalize(&self, mut p: Vector, mut v: Vector) -> Orthogonalized {
        let raw_norm = v.norm();
        let mut betas = vec![0.0; self.len()];
        for pass in 0..2 {
            for (i, (pi, vi)) in self.p_cols.iter().zip(&self.v_cols).enumerate() {
                let beta = v.dot(vi);
                p.axpy(-beta, pi, 1.0);
                v.axpy(-beta, vi, 1.0);
                betas[i] += beta;
            }
            if pass == 0 {
                let leak = self.v_cols.iter().map(|vi| vi.dot(&v).powi(2)).sum::<f64>().sqrt();
                if leak <= REORTH_TOL * v.norm() {
                    break;
                }
            }
        }
        let norm = v.norm();
        Orthogonalized {
            p,
            v,
            betas,
            raw_norm,
            norm,
        }
    }

    /// `Vᵀ q`, oldest column first.
    pub fn vt(&self, q: &Vector) -> Vec<f64> {
        self.v_cols.iter().map(|vi| vi.dot(q)).collect()
    }

    pub fn combine_p(&self, y: &[f64]) -> Vector {
        combine(self.p_cols.iter(), y, self.dim())
    }

    pub fn combine_v(&self, y: &[f64]) -> Vector {
        combine(self.v_cols.iter(), y, self.dim())
    }

    /// `P Vᵀ q`: the action of the secant inverse-Jacobian model.
    pub fn apply_inverse_model(&self, q: &Vector) -> Vector {
        self.combine_p(&self.vt(q))
    }

    pub fn dim(&self) -> usize {
        self.v_cols.front().map_or(0, |v| v.len())
    }

    pub fn p_matrix(&self) -> DMatrix<f64> {
        columns(self.p_cols.iter(), self.dim())
    }

    pub fn v_matrix(&self) -> DMatrix<f64> {
        columns(self.v_cols.iter(), self.dim())
    }

    /// `‖VᵀV - I‖_max`.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in self.v_cols.iter().enumerate() {
            for (j, b) in self.v_cols.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.dot(b) - target).abs());
            }
        }
        worst
    }
}

fn combine<'a>(cols: impl Iterator<Item = &'a Vector>, y: &[f64], n: usize) -> Vector {
    let mut out = Vector::zeros(n);
    for (c, &w) in cols.zip(y) {
        out.axpy(w, c, 1.0);
    }
    out
}
