//! L2-regularized logistic regression,
//! `φ(θ) = (1/N) Σ log(1 + exp(-yᵢ xᵢᵀθ)) + (λ/2)‖θ‖²`, solved as `∇φ = 0`.

use std::io::Read;
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::vector::{ensure_dim, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct LogRegProblem {
    /// `N × d`, one sample per row.
    pub features: DMatrix<f64>,
    /// `±1`.
    pub labels: Vector,
    pub lambda_reg: f64,
}

/// `log(1 + e^{-z})` without overflow.
fn softplus_neg(z: f64) -> f64 {
    if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogRegProblem {
    pub fn new(features: DMatrix<f64>, labels: Vector, lambda_reg: f64) -> Result<Self> {
        ensure_dim(&labels, features.nrows())?;
        if labels.iter().any(|&y| y != 1.0 && y != -1.0) {
            return Err(Error::Config("labels must be -1 or +1".into()));
        }
        Ok(Self {
            features,
            labels,
            lambda_reg,
        })
    }

    /// Gaussian features and labels drawn from a planted logistic model.
    pub fn synthetic(samples: usize, features: usize, lambda_reg: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = DMatrix::from_fn(samples, features, |_, _| rng.sample::<f64, _>(StandardNormal));
        let planted = Vector::from_fn(features, |_, _| rng.sample::<f64, _>(StandardNormal) / (features as f64).sqrt());
        let margins = &x * planted;
        let labels = margins.map(|m| if rng.random::<f64>() < sigmoid(m) { 1.0 } else { -1.0 });
        Self {
            features: x,
            labels,
            lambda_reg,
        }
    }

    /// Rows `label,feat1,…,featd`, no header.
    pub fn from_csv_reader<R: Read>(input: R, lambda_reg: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(input);
        let mut labels = Vec::new();
        let mut data = Vec::new();
        let mut width = None;
        for row in rdr.records() {
            let row = row?;
            let vals: Vec<f64> = row
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("bad dataset value: {e}")))?;
            if vals.len() < 2 {
                return Err(Error::Config("dataset rows need a label and features".into()));
            }
            if *width.get_or_insert(vals.len()) != vals.len() {
                return Err(Error::Config("ragged dataset rows".into()));
            }
            labels.push(vals[0]);
            data.extend_from_slice(&vals[1..]);
        }
        let d = width.ok_or_else(|| Error::Config("empty dataset".into()))? - 1;
        let x = DMatrix::from_row_slice(labels.len(), d, &data);
        Self::new(x, Vector::from_vec(labels), lambda_reg)
    }

    pub fn from_csv_path(path: impl AsRef<Path>, lambda_reg: f64) -> Result<Self> {
        Self::from_csv_reader(std::fs::File::open(path)?, lambda_reg)
    }

    pub fn samples(&self) -> usize {
        self.features.nrows()
    }

    /// `yᵢ xᵢᵀθ`.
    fn margins(&self, theta: &Vector) -> Result<Vector> {
        ensure_dim(theta, self.features.ncols())?;
        Ok((&self.features * theta).component_mul(&self.labels))
    }

    pub fn objective(&self, theta: &Vector) -> Result<f64> {
        let m = self.margins(theta)?;
        let loss: f64 = m.iter().map(|&z| softplus_neg(z)).sum::<f64>() / self.samples() as f64;
        Ok(loss + 0.5 * self.lambda_reg * theta.norm_squared())
    }

    pub fn gradient(&self, theta: &Vector) -> Result<Vector> {
        let m = self.margins(theta)?;
        // d/dz log(1 + e^{-z}) = -σ(-z)
        let w = Vector::from_fn(m.len(), |i, _| -self.labels[i] * sigmoid(-m[i]));
        Ok(self.features.tr_mul(&w) / self.samples() as f64 + theta * self.lambda_reg)
    }

    pub fn hessian_vec(&self, theta: &Vector, p: &Vector) -> Result<Vector> {
        let m = self.margins(theta)?;
        ensure_dim(p, theta.len())?;
        let xp = &self.features * p;
        let w = Vector::from_fn(m.len(), |i, _| {
            let s = sigmoid(m[i]);
            s * (1.0 - s) * xp[i]
        });
        Ok(self.features.tr_mul(&w) / self.samples() as f64 + p * self.lambda_reg)
    }
}

impl NonlinearProblem for LogRegProblem {
    fn dim(&self) -> usize {
        self.features.ncols()
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        self.gradient(x)
    }
    fn exact_jv(&self, x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        Some(self.hessian_vec(x, p))
    }
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        Some(self.objective(x))
    }
}
