//! Dense vector helpers shared by every solver.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Dense real vector used for iterates, residuals and directions alike.
pub type Vector = DVector<f64>;

pub fn ensure_dim(v: &Vector, expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

pub fn ensure_finite(v: &Vector, what: &'static str) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { what })
    }
}

pub fn inf_norm(v: &Vector) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// `1 - cos∠(a, b)`.
pub fn angular_distance(a: &Vector, b: &Vector) -> Result<f64> {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroResidual);
    }
    Ok(1.0 - a.dot(b) / (na * nb))
}

/// Stacks equally sized vectors as the columns of a dense matrix.
pub fn columns<'a>(cols: impl ExactSizeIterator<Item = &'a Vector>, nrows: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.enumerate() {
        m.set_column(j, c);
    }
    m
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}
