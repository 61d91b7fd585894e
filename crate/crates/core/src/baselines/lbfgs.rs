//! Limited-memory BFGS with the two-loop recursion and `H₀ = γ I`,
//! `γ = ⟨s, y⟩ / ⟨y, y⟩` from the newest pair.

use std::collections::VecDeque;

use super::{armijo_phi, check_start, value_grad, BaselineOptions, Tracker};
use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::Vector;

/// `H g` for the inverse-Hessian model stored in `(s, y)` pairs.
pub fn two_loop(pairs: &VecDeque<(Vector, Vector)>, g: &Vector) -> Vector {
    let mut q = g.clone();
    let mut coeffs = Vec::with_capacity(pairs.len());
    for (s, y) in pairs.iter().rev() {
        let rho = 1.0 / y.dot(s);
        let a = rho * s.dot(&q);
        q.axpy(-a, y, 1.0);
        coeffs.push((rho, a));
    }
    if let Some((s, y)) = pairs.back() {
        q *= s.dot(y) / y.norm_squared();
    }
    for ((s, y), (rho, a)) in pairs.iter().zip(coeffs.into_iter().rev()) {
        let b = rho * y.dot(&q);
        q.axpy(a - b, s, 1.0);
    }
    q
}

pub fn lbfgs_solve<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x0: &Vector,
    m: usize,
    opts: &BaselineOptions,
) -> Result<Solution> {
    check_start(prob, x0, opts)?;
    if m == 0 {
        return Err(Error::InvalidOptions("memory must be positive".into()));
    }
    let ls = opts.linesearch.unwrap_or_default();
    let mut t = Tracker::new(x0);
    let mut pairs: VecDeque<(Vector, Vector)> = VecDeque::new();
    let mut x = x0.clone();
    let mut pt = value_grad(prob, &x, opts.probe, &mut t)?;
    t.f0_norm = pt.f.norm();
    let mut step = 0.0;
    let converged = loop {
        if t.record(&x, pt.f.norm(), step, opts)? {
            break true;
        }
        if t.iter == opts.max_iters {
            break false;
        }
        let mut d = -two_loop(&pairs, &pt.grad);
        if pt.grad.dot(&d) >= 0.0 {
            pairs.clear();
            d = -&pt.grad;
        }
        let alpha0 = if pairs.is_empty() {
            (1.0 / pt.grad.norm()).min(1.0)
        } else {
            1.0
        };
        let mut accepted = armijo_phi(prob, &x, &pt, &d, alpha0, &ls, opts.probe, &mut t)?;
        if accepted.is_none() && !pairs.is_empty() {
            pairs.clear();
            d = -&pt.grad;
            let alpha0 = (1.0 / pt.grad.norm()).min(1.0);
            accepted = armijo_phi(prob, &x, &pt, &d, alpha0, &ls, opts.probe, &mut t)?;
        }
        let Some((alpha, x_new, p_new)) = accepted else {
            break false;
        };
        t.iter += 1;
        let s = &x_new - &x;
        let y = &p_new.grad - &pt.grad;
        if s.dot(&y) > 1e-10 * s.norm() * y.norm() {
            if pairs.len() == m {
                pairs.pop_front();
            }
            pairs.push_back((s, y));
        }
        step = alpha * d.norm();
        x = x_new;
        pt = p_new;
    };
    Ok(t.finish(x, converged, Vec::new()))
}
