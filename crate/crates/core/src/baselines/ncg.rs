//! Fletcher–Reeves nonlinear conjugate gradient on `φ`.
//!
//! The first trial step along `d` is the minimizer of the local quadratic,
//! `-⟨∇φ, d⟩ / ⟨d, ∇²φ d⟩`, with the curvature from one Jacobian probe.

use super::{armijo_phi, check_start, value_grad, BaselineOptions, Point, Tracker};
use crate::error::Result;
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::Vector;

fn trial_step<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    pt: &Point,
    d: &Vector,
    opts: &BaselineOptions,
    t: &mut Tracker,
) -> Result<f64> {
    let jd = t.jv(prob, x, d, &pt.f, opts.probe)?;
    let curvature = match prob.eval_phi(x) {
        Some(_) => prob.gradient_sign() * d.dot(&jd),
        None => jd.norm_squared(),
    };
    let slope = pt.grad.dot(d);
    Ok(if curvature > 0.0 { -slope / curvature } else { 1.0 })
}

pub fn ncg_fr_solve<P: NonlinearProblem + ?Sized>(prob: &P, x0: &Vector, opts: &BaselineOptions) -> Result<Solution> {
    check_start(prob, x0, opts)?;
    let mut t = Tracker::new(x0);
    let mut x = x0.clone();
    let mut pt = value_grad(prob, &x, opts.probe, &mut t)?;
    t.f0_norm = pt.f.norm();
    let mut d = -&pt.grad;
    let mut step = 0.0;
    let converged = loop {
        if t.record(&x, pt.f.norm(), step, opts)? {
            break true;
        }
        if t.iter == opts.max_iters {
            break false;
        }
        if pt.grad.dot(&d) >= 0.0 {
            d = -&pt.grad;
        }
        let alpha0 = trial_step(prob, &x, &pt, &d, opts, &mut t)?;
        let accepted = match &opts.linesearch {
            Some(ls) => match armijo_phi(prob, &x, &pt, &d, alpha0, ls, opts.probe, &mut t)? {
                Some(acc) => Some(acc),
                None if d != -&pt.grad => {
                    d = -&pt.grad;
                    let alpha0 = trial_step(prob, &x, &pt, &d, opts, &mut t)?;
                    armijo_phi(prob, &x, &pt, &d, alpha0, ls, opts.probe, &mut t)?
                }
                None => None,
            },
            None => {
                let x_new = &x + &d * alpha0;
                let p = value_grad(prob, &x_new, opts.probe, &mut t)?;
                Some((alpha0, x_new, p))
            }
        };
        let Some((alpha, x_new, p_new)) = accepted else {
            break false;
        };
        t.iter += 1;
        let beta = p_new.grad.norm_squared() / pt.grad.norm_squared();
        step = alpha * d.norm();
        d = -&p_new.grad + d * beta;
        x = x_new;
        pt = p_new;
    };
    Ok(t.finish(x, converged, Vec::new()))
}
