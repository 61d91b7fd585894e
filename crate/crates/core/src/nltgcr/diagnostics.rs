//! Identities that hold along every nlTGCR run, checked on the live state.
//! All quantities are relative to the residual norm at the iteration they
//! describe.

use serde::Serialize;

use crate::trace::Mode;
use crate::vector::Vector;
use crate::window::WindowPair;

#[derive(Debug, Clone, Serialize)]
pub struct IterationReport {
    pub iter: usize,
    pub mode: Mode,
    /// `‖Vᵀ r̃‖` for `r̃ = r - V y`: the least-squares residual is orthogonal
    /// to the window.
    pub orthogonality: f64,
    /// `|⟨v_new, r̃⟩ - ⟨v_new, r⟩|` for the pair built after the step.
    /// `None` when the window was cleared in between.
    pub projection: Option<f64>,
    /// `‖Vᵀr - ⟨v_last, r̃_prev⟩ e_last + Vᵀz‖` with `z = r̃_prev - r`:
    /// only the newest coefficient of `y` is not a deviation term.
    pub deviation: Option<f64>,
    /// `maxᵢ ‖P Vᵀ vᵢ - pᵢ‖`, relative to `maxᵢ ‖pᵢ‖`.
    pub secant: f64,
    /// `‖P Vᵀ q‖` for `q ⟂ span(V)`.
    pub no_change: f64,
    /// `‖y - y_ls‖ / ‖y‖` against a dense least-squares solve.
    pub least_squares: f64,
    /// `‖r̃_{j+1} - r_{j+1}‖ / ‖r_j‖`: how far the step left the linear model.
    pub model_deviation: f64,
    pub window_defect: f64,
}

impl IterationReport {
    /// Largest of the exact identities (everything except the model deviation).
    pub fn worst_identity(&self) -> f64 {
        [
            self.orthogonality,
            self.projection.unwrap_or(0.0),
            self.deviation.unwrap_or(0.0),
            self.secant,
            self.no_change,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub(crate) fn orthogonality(w: &WindowPair, r_tilde: &Vector, r_norm: f64) -> f64 {
    Vector::from_vec(w.vt(r_tilde)).norm() / r_norm
}

pub(crate) fn deviation(w: &WindowPair, r: &Vector, r_tilde_prev: &Vector) -> f64 {
    let mut lhs = Vector::from_vec(w.vt(r));
    let last = lhs.len() - 1;
    let (_, v_last) = w.last().expect("window is non-empty");
    lhs[last] -= v_last.dot(r_tilde_prev);
    let z = r_tilde_prev - r;
    let vz = Vector::from_vec(w.vt(&z));
    (lhs + vz).norm() / r.norm()
}

pub(crate) fn least_squares(w: &WindowPair, r: &Vector, y: &[f64]) -> f64 {
    let v = w.v_matrix();
    let qr = v.qr();
    let rhs = qr.q().tr_mul(r);
    let Some(c) = qr.r().solve_upper_triangular(&rhs) else {
        return f64::INFINITY;
    };
    let y = Vector::from_column_slice(y);
    (c - &y).norm() / y.norm().max(f64::MIN_POSITIVE)
}

pub(crate) fn projection(v_new: &Vector, r_tilde: &Vector, r_prev: &Vector) -> f64 {
    (v_new.dot(r_tilde) - v_new.dot(r_prev)).abs() / r_prev.norm()
}
