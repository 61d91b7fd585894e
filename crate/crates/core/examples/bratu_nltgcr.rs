//! nlTGCR(m) on the Bratu problem `Δu + λ eᵘ = 0`.
//!
//! ```text
//! cargo run --release --example bratu_nltgcr -- [grid_n] [m]
//! ```
//!
//! Prints every tenth trace record and the final summary.

use ::nltgcr::problems::BratuProblem;
use ::nltgcr::{nltgcr_solve, SolverOptions, Variant, Vector};

fn main() -> ::nltgcr::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let grid = args.next().unwrap_or(100);
    let m = args.next().unwrap_or(1);

    let prob = BratuProblem::new(grid, 0.5);
    let x0 = Vector::from_element(grid * grid, 1.0);
    let opts = SolverOptions {
        window_m: m,
        variant: Variant::Nonlinear,
        restart_every: None,
        max_iters: 1000,
        ..Default::default()
    };
    let sol = nltgcr_solve(&prob, &x0, &opts)?;

    println!("{:>5} {:>7} {:>12} {:>8}", "iter", "fevals", "resnorm", "step");
    for r in sol.trace.records().iter().filter(|r| r.iter % 10 == 0) {
        println!("{:>5} {:>7} {:>12.3e} {:>8.4}", r.iter, r.fevals, r.resnorm, r.step_size);
    }
    println!(
        "grid {grid}x{grid}, m = {m}: converged {} after {} iterations and {} evaluations, relres {:.2e}",
        sol.converged,
        sol.iterations,
        sol.fevals,
        sol.final_resnorm()
    );
    Ok(())
}
