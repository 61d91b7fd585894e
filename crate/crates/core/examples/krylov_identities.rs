//! Checks the matrix identities behind GCR on a 30×30 system: the
//! residual/direction factorizations, semi-conjugacy, and the approximate
//! inverse `B = P Vᵀ` induced by a run.

use ::nltgcr::linear::verify::{
    ar_ap_bidiagonal_violation, b_reconstruction_error, check_semiconjugacy, h_reconstruction_error,
    induced_inverse_checks, symmetric_beta_violation,
};
use ::nltgcr::linear::{gcr_solve, KrylovOptions};
use ::nltgcr::problems::{make_linear_problem, LinearKind};
use ::nltgcr::Vector;

fn main() -> ::nltgcr::Result<()> {
    for kind in [LinearKind::Nonsymmetric, LinearKind::Spd] {
        let (a, b) = make_linear_problem(kind, 30, 5);
        let (_, h) = gcr_solve(&a, &b, &Vector::zeros(30), &KrylovOptions::default())?;
        let semi = check_semiconjugacy(&h, &a);
        println!("{kind:?} ({} iterations)", h.iterations());
        println!("  R = P B          {:.1e}", b_reconstruction_error(&h)?);
        println!("  A P = R H        {:.1e}", h_reconstruction_error(&h, &a)?);
        println!("  lower(RᵀAR)      {:.1e}", semi.lower);
        println!("  offdiag(RᵀAR)    {:.1e}", semi.off_diagonal);
        println!("  β_ij, i < j      {:.1e}", symmetric_beta_violation(&h));
        println!("  (AR)ᵀAP pattern  {:.1e}", ar_ap_bidiagonal_violation(&h, &a));
        let inv = induced_inverse_checks(&h, a.matrix(), 5, 1)?;
        println!("  induced inverse  {:.1e}", inv.max());
    }
    Ok(())
}
