//! The three residual-update variants side by side on Bratu.
//!
//! The linearized variant advances `r ← r - α V y` without evaluating `f`,
//! so its trace shows the model residual. The run below also asks for the
//! true residual (uncharged) to show where the two part ways.

use ::nltgcr::problems::BratuProblem;
use ::nltgcr::{nltgcr_solve, SolverOptions, Variant, Vector};

fn main() -> ::nltgcr::Result<()> {
    let prob = BratuProblem::new(100, 0.5);
    let x0 = Vector::from_element(10_000, 1.0);
    for variant in [Variant::Nonlinear, Variant::Linearized, Variant::Adaptive] {
        let opts = SolverOptions {
            variant,
            tol_rel: 1e-8,
            restart_every: None,
            max_iters: 600,
            monitor_residual: variant == Variant::Linearized,
            ..Default::default()
        };
        let sol = nltgcr_solve(&prob, &x0, &opts)?;
        let to = |t: f64| sol.trace.fevals_to(t).map_or("-".to_string(), |f| f.to_string());
        println!(
            "{variant:<10?} evaluations to 1e-4 {:>4}  1e-6 {:>4}  1e-8 {:>4}   switches {:?}",
            to(1e-4),
            to(1e-6),
            to(1e-8),
            sol.switches.iter().map(|s| (s.iter, s.to)).collect::<Vec<_>>()
        );
    }
    Ok(())
}
