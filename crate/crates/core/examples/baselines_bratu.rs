//! Every comparison solver on the `h²`-scaled Bratu problem, with the same
//! evaluation accounting as nlTGCR.

use ::nltgcr::baselines::{
    aa_solve, broyden2_solve, lbfgs_solve, ncg_fr_solve, nesterov_solve, newton_krylov_solve, BaselineOptions,
    Forcing,
};
use ::nltgcr::problems::BratuProblem;
use ::nltgcr::{nltgcr_solve, ConvergenceTrace, Result, SolverOptions, Variant, Vector};

fn main() {
    let grid = 60;
    let prob = BratuProblem::new(grid, 0.5).scaled();
    let x0 = Vector::zeros(grid * grid);
    let tol = 1e-6;
    let opts = BaselineOptions {
        tol_rel: tol,
        max_iters: 3000,
        ..Default::default()
    };
    let ours = SolverOptions {
        variant: Variant::Adaptive,
        tol_rel: tol,
        restart_every: None,
        max_iters: 1000,
        ..Default::default()
    };
    let runs: Vec<(&str, Result<ConvergenceTrace>)> = vec![
        ("nlTGCR(1)", nltgcr_solve(&prob, &x0, &ours).map(|s| s.trace)),
        ("AA(10)", aa_solve(&prob, &x0, 10, 0.1, &opts).map(|s| s.trace)),
        ("L-BFGS(10)", lbfgs_solve(&prob, &x0, 10, &opts).map(|s| s.trace)),
        ("NCG-FR", ncg_fr_solve(&prob, &x0, &opts).map(|s| s.trace)),
        ("Nesterov", nesterov_solve(&prob, &x0, &opts).map(|s| s.trace)),
        (
            "Newton-Krylov",
            newton_krylov_solve(&prob, &x0, 50, Forcing::EisenstatWalker { eta0: 0.9 }, &opts).map(|s| s.trace),
        ),
        ("Broyden-II", broyden2_solve(&prob, &x0, 0.1, &opts).map(|s| s.trace)),
    ];
    println!("evaluations to {tol:.0e} on a {grid}x{grid} grid");
    for (name, trace) in runs {
        match trace {
            Ok(t) => match t.fevals_to(tol) {
                Some(f) => println!("  {name:<14} {f:>6}"),
                None => println!("  {name:<14}   never (final {:.1e})", t.final_resnorm().unwrap_or(f64::NAN)),
            },
            Err(e) => println!("  {name:<14}   {e}"),
        }
    }
}
