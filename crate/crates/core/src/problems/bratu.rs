//! The Bratu problem `Δu + λ eᵘ = 0` on the unit square with zero Dirichlet
//! data, discretized by the 5-point stencil on an `N × N` interior grid.
//!
//! Sign convention: `f(u) = Δ_h u + λ eᵘ`. The discrete Laplacian is
//! negative definite, so for small `λ` the Jacobian `Δ_h + λ diag(eᵘ)` is
//! symmetric negative definite and `-f` is the gradient of the convex
//! potential `φ(u) = ½ uᵀ(-Δ_h)u - λ Σ eᵘ`.

use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::vector::{ensure_dim, Vector};

/// Largest exponent accepted before `eᵘ` is reported as an overflow.
const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BratuProblem {
    pub grid_n: usize,
    pub lambda: f64,
    /// Multiply `f` (and `φ`) by `h²`. This is the form fixed-point style
    /// methods such as Anderson mixing expect; it does not change the root.
    pub h2_scaled: bool,
}

impl Default for BratuProblem {
    fn default() -> Self {
        Self::new(100, 0.5)
    }
}

impl BratuProblem {
    pub fn new(grid_n: usize, lambda: f64) -> Self {
        assert!(grid_n >= 1, "grid needs at least one interior point");
        Self {
            grid_n,
            lambda,
            h2_scaled: false,
        }
    }

    pub fn scaled(mut self) -> Self {
        self.h2_scaled = true;
        self
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.grid_n as f64 + 1.0)
    }

    fn scale(&self) -> f64 {
        if self.h2_scaled {
            1.0
        } else {
            let h = self.h();
            1.0 / (h * h)
        }
    }

    /// `Δ_h u` times `h²` when `h2_scaled`.
    pub fn laplacian(&self, u: &Vector) -> Vector {
        let n = self.grid_n;
        let s = self.scale();
        let mut out = Vector::zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                let k = i * n + j;
                let mut acc = -4.0 * u[k];
                if i > 0 {
                    acc += u[k - n];
                }
                if i + 1 < n {
                    acc += u[k + n];
                }
                if j > 0 {
                    acc += u[k - 1];
                }
                if j + 1 < n {
                    acc += u[k + 1];
                }
                out[k] = s * acc;
            }
        }
        out
    }

    fn exp(&self, u: &Vector) -> Result<Vector> {
        if let Some(&arg) = u.iter().find(|&&t| t > EXP_LIMIT) {
            return Err(Error::Overflow { arg });
        }
        Ok(u.map(f64::exp))
    }

    fn source_weight(&self) -> f64 {
        if self.h2_scaled {
            let h = self.h();
            self.lambda * h * h
        } else {
            self.lambda
        }
    }
}

impl NonlinearProblem for BratuProblem {
    fn dim(&self) -> usize {
        self.grid_n * self.grid_n
    }

    fn eval_f(&self, u: &Vector) -> Result<Vector> {
        ensure_dim(u, self.dim())?;
        let e = self.exp(u)?;
        Ok(self.laplacian(u) + e * self.source_weight())
    }

    fn exact_jv(&self, u: &Vector, p: &Vector) -> Option<Result<Vector>> {
        Some((|| {
            ensure_dim(u, self.dim())?;
            ensure_dim(p, self.dim())?;
            let e = self.exp(u)?;
            Ok(self.laplacian(p) + e.component_mul(p) * self.source_weight())
        })())
    }

    fn eval_phi(&self, u: &Vector) -> Option<Result<f64>> {
        Some((|| {
            ensure_dim(u, self.dim())?;
            let e = self.exp(u)?;
            Ok(-0.5 * u.dot(&self.laplacian(u)) - self.source_weight() * e.sum())
        })())
    }

    fn gradient_sign(&self) -> f64 {
        -1.0
    }
}
