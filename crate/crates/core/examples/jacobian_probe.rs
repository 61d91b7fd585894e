//! Forward-difference `J v` against the exact product, and the descent test
//! used by the line search.

use ::nltgcr::problems::BratuProblem;
use ::nltgcr::{descent_check, frechet_jv, JvProbe, NonlinearProblem, Vector};

fn main() -> ::nltgcr::Result<()> {
    let prob = BratuProblem::new(30, 0.5);
    let n = prob.dim();
    let u = Vector::from_fn(n, |i, _| ((i % 30) as f64 / 30.0).sin());
    let p = Vector::from_fn(n, |i, _| ((i * 7) % 11) as f64 - 5.0);
    let f_u = prob.eval_f(&u)?;

    let exact = prob.exact_jv(&u, &p).expect("Bratu has an exact Jv")?;
    for scale in [1e-4, 1e-7, 1e-10] {
        let probe = JvProbe {
            eps_scale: scale,
            ..Default::default()
        };
        let (jv, fevals) = frechet_jv(&prob, &u, &p, &f_u, probe)?;
        println!(
            "eps scale {scale:.0e}: relative error {:.2e} ({fevals} evaluation)",
            (&jv - &exact).norm() / exact.norm()
        );
    }

    // -f is a descent direction for ½‖f‖² when J is negative definite
    let r = -&f_u;
    let (slope, _) = descent_check(&prob, &u, &r, &f_u, JvProbe::default())?;
    println!("⟨r, J f⟩ = {slope:.3e} (positive: f itself points downhill)");
    Ok(())
}
