//! GCR, TGCR(m) and CR on seeded dense systems.
//!
//! ```text
//! cargo run --example linear_krylov
//! ```

use ::nltgcr::linear::{cr_solve, gcr_solve, tgcr_solve, KrylovOptions, LinearOperator};
use ::nltgcr::problems::{make_linear_problem, LinearKind};
use ::nltgcr::Vector;

fn main() -> ::nltgcr::Result<()> {
    let opts = KrylovOptions::default();
    let n = 200;
    let x0 = Vector::zeros(n);

    let (spd, b) = make_linear_problem(LinearKind::Spd, n, 1);
    let (x, full) = gcr_solve(&spd, &b, &x0, &opts)?;
    let (_, short) = tgcr_solve(&spd, &b, &x0, 1, &opts)?;
    let (_, cr) = cr_solve(&spd, &b, &x0, &opts)?;
    println!("SPD n={n}");
    println!("  GCR      {:>3} iterations", full.iterations());
    println!("  TGCR(1)  {:>3} iterations", short.iterations());
    println!("  CR       {:>3} iterations", cr.iterations());
    println!("  ‖b - Ax‖/‖b‖ = {:.2e}", (&b - spd.apply(&x)).norm() / b.norm());

    // truncation costs iterations once A is not symmetric
    let (ns, b) = make_linear_problem(LinearKind::Nonsymmetric, n, 2);
    println!("nonsymmetric n={n}");
    let (_, full) = gcr_solve(&ns, &b, &x0, &opts)?;
    println!("  GCR      {:>3} iterations", full.iterations());
    for m in [1, 5, 20] {
        match tgcr_solve(&ns, &b, &x0, m, &opts) {
            Ok((_, h)) => println!("  TGCR({m:<2}) {:>3} iterations", h.iterations()),
            Err(e) => println!("  TGCR({m:<2}) {e}"),
        }
    }
    Ok(())
}
