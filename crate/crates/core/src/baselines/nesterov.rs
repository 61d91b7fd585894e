//! Nesterov's accelerated gradient with a fixed step `1/L` and
//! gradient-based momentum restart.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{check_start, value_grad, BaselineOptions, Tracker};
use crate::jacobian::{frechet_jv, JvProbe};
use crate::error::Result;
use crate::problem::NonlinearProblem;
use crate::solution::Solution;
use crate::vector::Vector;

pub const POWER_ITERS: usize = 10;
pub const REFRESH_ITERS: usize = 3;
/// `L` is inflated by this factor since power iteration underestimates it.
pub const SAFETY: f64 = 1.1;

/// Power iteration on `J(x)` from `q`. Returns `‖J q‖` for the last unit
/// `q`, the final `q`, and the evaluations spent.
pub fn estimate_lipschitz<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    f_x: &Vector,
    start: &Vector,
    iters: usize,
    probe: JvProbe,
) -> Result<(f64, Vector, usize)> {
    let mut q = start.normalize();
    let mut l = 0.0;
    let mut spent = 0;
    for _ in 0..iters {
        let (w, fe) = frechet_jv(prob, x, &q, f_x, probe)?;
        spent += fe;
        l = w.norm();
        if l == 0.0 {
            break;
        }
        q = w / l;
    }
    Ok((l, q, spent))
}

pub fn nesterov_solve<P: NonlinearProblem + ?Sized>(prob: &P, x0: &Vector, opts: &BaselineOptions) -> Result<Solution> {
    check_start(prob, x0, opts)?;
    let mut t = Tracker::new(x0);
    let synthesized = prob.eval_phi(x0).is_none();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let start = Vector::from_fn(x0.len(), |_, _| rng.sample::<f64, _>(StandardNormal));

    let mut pt = value_grad(prob, x0, opts.probe, &mut t)?;
    t.f0_norm = pt.f.norm();
    let lipschitz = |prob: &P, y: &Vector, f: &Vector, q: &Vector, iters, t: &mut Tracker| -> Result<(f64, Vector)> {
        let (l, q, spent) = estimate_lipschitz(prob, y, f, q, iters, opts.probe).map_err(|e| t.wrap(e))?;
        t.fevals += spent;
        let l = if synthesized { l * l } else { l };
        Ok((SAFETY * l.max(f64::MIN_POSITIVE), q))
    };
    let (mut l, mut q) = lipschitz(prob, x0, &pt.f, &start, POWER_ITERS, &mut t)?;

    let mut x = x0.clone();
    let mut y = x0.clone();
    let mut momentum = 1.0_f64;
    let mut step = 0.0;
    let converged = loop {
        if t.record(&y, pt.f.norm(), step, opts)? {
            break true;
        }
        if t.iter == opts.max_iters {
            break false;
        }
        let x_new = &y - &pt.grad / l;
        if pt.grad.dot(&(&x_new - &x)) > 0.0 {
            momentum = 1.0;
            let (l_new, q_new) = lipschitz(prob, &y, &pt.f, &q, REFRESH_ITERS, &mut t)?;
            l = l_new;
            q = q_new;
        }
        let next = 0.5 * (1.0 + (1.0 + 4.0 * momentum * momentum).sqrt());
        let y_new = &x_new + (&x_new - &x) * ((momentum - 1.0) / next);
        step = (&y_new - &y).norm();
        x = x_new;
        y = y_new;
        momentum = next;
        pt = value_grad(prob, &y, opts.probe, &mut t)?;
        t.iter += 1;
    };
    Ok(t.finish(y, converged, Vec::new()))
}
