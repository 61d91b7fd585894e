//! Backtracking on `‖f‖²` for a scalar cubic, plus the adaptive initial step.

use ::nltgcr::{backtrack, update_alpha0, FnProblem, LineSearchOptions, Vector};

fn main() -> ::nltgcr::Result<()> {
    let prob = FnProblem::new(1, |x| x.map(|v| v.powi(3) - 1.0));
    let x = Vector::from_element(1, 3.0);
    let r = Vector::from_element(1, 1.0 - 27.0);
    let jac = 27.0;
    // an overlong Newton step, so the first trials overshoot
    let d = &r / jac * 8.0;
    let slope = jac * r[0] * d[0];

    let mut opts = LineSearchOptions::default();
    for round in 0..3 {
        let res = backtrack(&prob, &x, &d, &r, slope, &opts)?;
        println!(
            "round {round}: α₀ = {:.4}, accepted α = {:.4} after {} trials, ‖f‖ {:.3} -> {:.3}",
            opts.alpha0,
            res.alpha,
            res.steps,
            r.norm(),
            res.f_new.norm()
        );
        opts = update_alpha0(&opts, res.steps);
    }
    Ok(())
}
