//! Regularized logistic regression: nlTGCR(10) on `∇L(θ) = 0` against
//! nonlinear CG and L-BFGS. Pass a CSV path (label first, then features) to
//! use real data instead of the seeded synthetic set.

use ::nltgcr::baselines::{lbfgs_solve, ncg_fr_solve, BaselineOptions};
use ::nltgcr::problems::LogRegProblem;
use ::nltgcr::{nltgcr_solve, ConvergenceTrace, SolverOptions, Vector};

fn report(name: &str, t: &ConvergenceTrace) {
    let to = |x: f64| t.fevals_to(x).map_or("-".into(), |f| f.to_string());
    println!("{name:<10} evaluations to 1e-4 {:>5}  1e-6 {:>5}  1e-8 {:>5}", to(1e-4), to(1e-6), to(1e-8));
}

fn main() -> ::nltgcr::Result<()> {
    let prob = match std::env::args().nth(1) {
        Some(path) => LogRegProblem::from_csv_path(path, 1e-2)?,
        None => LogRegProblem::synthetic(2000, 200, 1e-2, 1),
    };
    let d = prob.features.ncols();
    let x0 = Vector::zeros(d);
    println!("{} samples, {d} features", prob.samples());

    let sol = nltgcr_solve(
        &prob,
        &x0,
        &SolverOptions {
            window_m: 10,
            tol_rel: 1e-8,
            ..Default::default()
        },
    )?;
    report("nlTGCR(10)", &sol.trace);
    println!("           objective {:.6}", prob.objective(&sol.x)?);

    let bopts = BaselineOptions {
        tol_rel: 1e-8,
        max_iters: 2000,
        ..Default::default()
    };
    report("NCG-FR", &ncg_fr_solve(&prob, &x0, &bopts)?.trace);
    report("L-BFGS(10)", &lbfgs_solve(&prob, &x0, 10, &bopts)?.trace);
    Ok(())
}
