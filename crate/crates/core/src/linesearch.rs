//! Backtracking on `‖f‖²` under the Armijo sufficient-decrease condition
//!
//! ```text
//! ‖f(x + α d)‖² ≤ ‖r‖² - 2 c₁ α ⟨J(x)ᵀr, d⟩,   r = -f(x)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{evaluate, NonlinearProblem};
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineSearchOptions {
    pub c1: f64,
    pub tau: f64,
    pub max_backtracks: usize,
    /// Initial trial step, adapted between searches by [`update_alpha0`].
    pub alpha0: f64,
}

impl Default for LineSearchOptions {
    fn default() -> Self {
        Self {
            c1: 1e-4,
            tau: 0.8,
            max_backtracks: 30,
            alpha0: 1.0,
        }
    }
}

impl LineSearchOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1 < 1.0) {
            return Err(Error::InvalidOptions("c1 must lie in (0, 1)".into()));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::InvalidOptions("tau must lie in (0, 1)".into()));
        }
        if !(self.alpha0 > 0.0 && self.alpha0 <= 1.0) {
            return Err(Error::InvalidOptions("alpha0 must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LineSearchResult {
    pub alpha: f64,
    pub x_new: Vector,
    pub f_new: Vector,
    pub fevals: usize,
    /// Trial points examined, including the accepted one.
    pub steps: usize,
    /// `false` when the backtrack budget ran out; `alpha` is then the best
    /// trial seen.
    pub accepted: bool,
}

/// The sufficient-decrease test, verbatim.
pub fn armijo_holds(f_new_sq: f64, r_sq: f64, alpha: f64, slope: f64, c1: f64) -> bool {
    f_new_sq <= r_sq - 2.0 * c1 * alpha * slope
}

/// `slope` is `⟨J(x)ᵀr, d⟩`, which must be positive.
pub fn backtrack<P: NonlinearProblem + ?Sized>(
    prob: &P,
    x: &Vector,
    d: &Vector,
    r: &Vector,
    slope: f64,
    opts: &LineSearchOptions,
) -> Result<LineSearchResult> {
    if !(slope > 0.0) {
        return Err(Error::NotDescent { slope });
    }
    let r_sq = r.norm_squared();
    let mut alpha = opts.alpha0;
    let mut best: Option<(f64, f64, Vector, Vector)> = None;
    let mut last_err = None;
    for step in 1..=opts.max_backtracks + 1 {
        let x_new = x + d * alpha;
        match evaluate(prob, &x_new) {
            Ok(f_new) => {
                let f_sq = f_new.norm_squared();
                if armijo_holds(f_sq, r_sq, alpha, slope, opts.c1) {
                    return Ok(LineSearchResult {
                        alpha,
                        x_new,
                        f_new,
                        fevals: step,
                        steps: step,
                        accepted: true,
                    });
                }
                if best.as_ref().is_none_or(|b| f_sq < b.0) {
                    best = Some((f_sq, alpha, x_new, f_new));
                }
            }
            Err(e) if e.is_domain_error() => last_err = Some(e),
            Err(e) => return Err(e),
        }
        alpha *= opts.tau;
    }
    let steps = opts.max_backtracks + 1;
    match best {
        Some((_, alpha, x_new, f_new)) => Ok(LineSearchResult {
            alpha,
            x_new,
            f_new,
            fevals: steps,
            steps,
            accepted: false,
        }),
        None => Err(last_err.expect("every trial failed")),
    }
}

/// Linear-model version: the left-hand side becomes `‖r - α w‖²` with
/// `w = V y`, so no function is evaluated. Returns `(alpha, steps, accepted)`.
pub fn backtrack_linear(r: &Vector, w: &Vector, slope: f64, opts: &LineSearchOptions) -> Result<(f64, usize, bool)> {
    if !(slope > 0.0) {
        return Err(Error::NotDescent { slope });
    }
    let r_sq = r.norm_squared();
    let mut alpha = opts.alpha0;
    for step in 1..=opts.max_backtracks + 1 {
        let lhs = (r - w * alpha).norm_squared();
        if armijo_holds(lhs, r_sq, alpha, slope, opts.c1) {
            return Ok((alpha, step, true));
        }
        alpha *= opts.tau;
    }
    Ok((alpha / opts.tau, opts.max_backtracks + 1, false))
}

/// `α₀ ← min{1, α₀/τ}` after a one-step search, `α₀ ← τ α₀` otherwise.
pub fn update_alpha0(opts: &LineSearchOptions, steps_taken: usize) -> LineSearchOptions {
    let alpha0 = if steps_taken <= 1 {
        (opts.alpha0 / opts.tau).min(1.0)
    } else {
        opts.tau * opts.alpha0
    };
    LineSearchOptions { alpha0, ..*opts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::FnProblem;

    fn s(x: f64) -> Vector {
        Vector::from_vec(vec![x])
    }

    #[test]
    fn identity_accepts_full_step() {
        let prob = FnProblem::new(1, |x| x.clone());
        let res = backtrack(&prob, &s(1.0), &s(-1.0), &s(-1.0), 1.0, &LineSearchOptions::default()).unwrap();
        assert_eq!((res.alpha, res.steps, res.fevals), (1.0, 1, 1));
        assert!(res.accepted);
        assert_eq!(res.f_new, s(0.0));
    }

    #[test]
    fn overshooting_step_is_shortened() {
        // f(x) = x³ - 1 at x = 0.5 with a Newton step: d = -f/f' = 0.875/0.75,
        // overshoots to x ≈ 1.667 where ‖f‖² ≈ 14.4 > 0.77.
        let prob = FnProblem::new(1, |x| x.map(|t| t * t * t - 1.0));
        let x = s(0.5);
        let f = prob.eval_f(&x).unwrap();
        let r = -&f;
        let d = s(0.875 / 0.75);
        let slope = r[0] * 0.75 * d[0];
        let opts = LineSearchOptions::default();
        let res = backtrack(&prob, &x, &d, &r, slope, &opts).unwrap();
        assert!(res.accepted);
        assert!(res.steps > 1 && res.alpha < 1.0);
        assert!(armijo_holds(res.f_new.norm_squared(), r.norm_squared(), res.alpha, slope, opts.c1));
        // every larger trial on the grid fails the test
        let mut a = 1.0;
        while a > res.alpha * (1.0 + 1e-12) {
            let fa = (0.5 + a * d[0]).powi(3) - 1.0;
            assert!(!armijo_holds(fa * fa, r.norm_squared(), a, slope, opts.c1));
            a *= opts.tau;
        }
    }

    #[test]
    fn non_descent_rejected() {
        let prob = FnProblem::new(1, |x| x.clone());
        for slope in [0.0, -1.0, f64::NAN] {
            assert!(matches!(
                backtrack(&prob, &s(1.0), &s(1.0), &s(-1.0), slope, &LineSearchOptions::default()),
                Err(Error::NotDescent { .. })
            ));
        }
    }

    #[test]
    fn exhausted_budget_returns_best_trial() {
        // the slope is a lie, so nothing passes
        let prob = FnProblem::new(1, |x| x.clone());
        let opts = LineSearchOptions { max_backtracks: 3, ..Default::default() };
        let res = backtrack(&prob, &s(1.0), &s(1.0), &s(-1.0), 1.0, &opts).unwrap();
        assert!(!res.accepted);
        assert_eq!(res.steps, 4);
        assert!((res.alpha - 0.8f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn domain_errors_shrink_the_step() {
        let prob = FnProblem::new(1, |x| x.map(|t| if t > 1.5 { f64::NAN } else { t - 1.0 }));
        let x = s(0.0);
        let r = s(1.0);
        let res = backtrack(&prob, &x, &s(2.0), &r, 2.0, &LineSearchOptions::default()).unwrap();
        assert!(res.accepted && res.alpha * 2.0 <= 1.5);
    }

    #[test]
    fn linear_model_search() {
        let r = Vector::from_vec(vec![1.0, 1.0]);
        let (alpha, steps, ok) = backtrack_linear(&r, &r, 2.0, &LineSearchOptions::default()).unwrap();
        assert_eq!((alpha, steps, ok), (1.0, 1, true));
    }

    #[test]
    fn alpha0_rule() {
        let o = LineSearchOptions::default();
        assert_eq!(update_alpha0(&o, 1).alpha0, 1.0);
        let half = LineSearchOptions { alpha0: 0.5, ..o };
        assert_eq!(update_alpha0(&half, 1).alpha0, 0.5 / 0.8);
        assert_eq!(update_alpha0(&half, 3).alpha0, 0.8 * 0.5);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn alpha0_stays_in_unit_interval(steps in proptest::collection::vec(1usize..6, 1..200)) {
                let mut o = LineSearchOptions::default();
                for k in steps {
                    o = update_alpha0(&o, k);
                    prop_assert!(o.alpha0 > 0.0 && o.alpha0 <= 1.0);
                }
            }

            #[test]
            fn accepted_steps_decrease_the_residual(x0 in -2.0f64..2.0, c in 0.5f64..3.0) {
                // f(x) = x + c x³ is monotone, so the Newton direction is a descent direction
                let prob = FnProblem::new(1, move |x| x.map(|t| t + c * t * t * t));
                let x = s(x0);
                let f = prob.eval_f(&x).unwrap();
                prop_assume!(f[0].abs() > 1e-12);
                let jac = 1.0 + 3.0 * c * x0 * x0;
                let d = s(-f[0] / jac);
                let r = -&f;
                let slope = r[0] * jac * d[0];
                let res = backtrack(&prob, &x, &d, &r, slope, &LineSearchOptions::default()).unwrap();
                if res.accepted {
                    prop_assert!(res.f_new.norm() <= f.norm());
                }
            }
        }
    }
}
