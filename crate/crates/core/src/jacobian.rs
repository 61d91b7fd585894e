//! Matrix-free Jacobian-vector products.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{evaluate, NonlinearProblem};
use crate::vector::{inf_norm, Vector};

/// Roughly the square root of the double-precision unit roundoff.
pub const DEFAULT_EPS_SCALE: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JvMode {
    /// Forward difference, one function evaluation.
    Frechet,
    /// The problem's own `exact_jv`, no function evaluations.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JvProbe {
    pub mode: JvMode,
    pub eps_scale: f64,
}

impl Default for JvProbe {
    fn default() -> Self {
        Self {
            mode: JvMode::Frechet,
            eps_scale: DEFAULT_EPS_SCALE,
        }
    }
}

impl JvProbe {
    pub fn exact() -> Self {
        Self {
            mode: JvMode::Exact,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps_scale > 0.0 && self.eps_scale.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidOptions("eps_scale must be positive".into()))
        }
    }

    /// Difference step `eps_scale (1 + ‖x‖∞) / ‖p‖₂`.
    pub fn step(&self, x: &Vector, p: &Vector) -> f64 {
        self.eps_scale * (1.0 + inf_norm(x)) / p.norm()
    }
}

/// `J(x) p` given `f_x = f(x)`. Returns the product and the number of
/// function evaluations spent.
pub fn frechet_jv<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    p: &Vector,
    f_x: &Vector,
    probe: JvProbe,
) -> Result<(Vector, usize)> {
    if p.norm() == 0.0 {
        return Err(Error::ZeroDirection);
    }
    match probe.mode {
        JvMode::Exact => {
            let jv = prob.exact_jv(x, p).ok_or(Error::NoExactJacobian)??;
            Ok((jv, 0))
        }
        JvMode::Frechet => {
            let eps = probe.step(x, p);
            let shifted = x + p * eps;
            let f_shift = evaluate(prob, &shifted)?;
            Ok(((f_shift - f_x) / eps, 1))
        }
    }
}

/// `⟨r, J(x) d⟩ = ⟨J(x)ᵀr, d⟩` with `r = -f(x)`. Positive values mean `d`
/// decreases `½‖f‖²`.
pub fn descent_check<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    r: &Vector,
    d: &Vector,
    probe: JvProbe,
) -> Result<(f64, usize)> {
    let f_x = -r;
    let (jd, fevals) = frechet_jv(prob, x, d, &f_x, probe)?;
    Ok((r.dot(&jd), fevals))
}
