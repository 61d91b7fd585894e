//! Per-iteration identities of an nlTGCR run: orthogonality of the
//! least-squares residual, the secant and no-change conditions of the
//! implied inverse Jacobian `P Vᵀ`, and the distance from the linear model.
//! The full reports go to `reports.json` in the working directory when
//! `--json` is passed.

use ::nltgcr::nltgcr::reports_json;
use ::nltgcr::problems::BratuProblem;
use ::nltgcr::{nltgcr_solve, SolverOptions, Vector};

fn main() -> ::nltgcr::Result<()> {
    let prob = BratuProblem::new(40, 0.5);
    let x0 = Vector::zeros(1600);
    let opts = SolverOptions {
        window_m: 5,
        check_invariants: true,
        ..Default::default()
    };
    let sol = nltgcr_solve(&prob, &x0, &opts)?;
    println!("{:>4} {:>10} {:>10} {:>10} {:>10}", "iter", "orth", "secant", "no-change", "model");
    for r in sol.reports.iter().step_by(5) {
        println!(
            "{:>4} {:>10.1e} {:>10.1e} {:>10.1e} {:>10.1e}",
            r.iter, r.orthogonality, r.secant, r.no_change, r.model_deviation
        );
    }
    let worst = sol.reports.iter().map(|r| r.worst_identity()).fold(0.0, f64::max);
    println!("worst identity over {} iterations: {worst:.1e}", sol.reports.len());
    if std::env::args().any(|a| a == "--json") {
        std::fs::write("reports.json", reports_json(&sol.reports))?;
        println!("wrote reports.json");
    }
    Ok(())
}
