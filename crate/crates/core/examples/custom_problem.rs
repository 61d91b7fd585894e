//! A user-defined system through `FnProblem`:
//! `xᵢ + ¼ tanh(x_{i-1} + x_{i+1}) = cᵢ` on a ring.

use ::nltgcr::{nltgcr_solve, FnProblem, SolverOptions, Vector};

fn main() -> ::nltgcr::Result<()> {
    let n = 500;
    let c = Vector::from_fn(n, |i, _| (i as f64 * 0.1).cos());
    let prob = FnProblem::new(n, move |x| {
        Vector::from_fn(n, |i, _| {
            let left = x[(i + n - 1) % n];
            let right = x[(i + 1) % n];
            x[i] + 0.25 * (left + right).tanh() - c[i]
        })
    });
    for m in [1, 3, 10] {
        let opts = SolverOptions {
            window_m: m,
            tol_rel: 1e-12,
            ..Default::default()
        };
        let sol = nltgcr_solve(&prob, &Vector::zeros(n), &opts)?;
        println!(
            "m = {m:>2}: {} iterations, {} evaluations, relres {:.1e}",
            sol.iterations,
            sol.fevals,
            sol.final_resnorm()
        );
    }
    Ok(())
}
