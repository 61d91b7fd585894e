//! Dense reconstructions of the matrices behind a GCR run, and checks of the
//! identities they satisfy. These are verification utilities meant for
//! problems of modest size (n ≤ 200 or so).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linear::{KrylovHistory, LinearOperator};
use crate::vector::{columns, max_abs, Vector};

/// Number of directions usable for reconstruction: `k + 1` with
/// `k + 1 ≤ |P|` and `k + 1 ≤ |R|`.
fn usable(h: &KrylovHistory) -> usize {
    h.directions.len().min(h.residuals.len())
}

/// `P̂_k = [p̂_0 … p̂_k]`, unnormalized directions.
pub fn direction_matrix(h: &KrylovHistory, count: usize) -> DMatrix<f64> {
    let cols: Vec<Vector> = (0..count).map(|j| h.direction_hat(j)).collect();
    columns(cols.iter(), h.residuals[0].len())
}

pub fn residual_matrix(h: &KrylovHistory, count: usize) -> DMatrix<f64> {
    columns(h.residuals[..count].iter(), h.residuals[0].len())
}

/// Unit upper triangular `B` with `B[i][j] = β̂_{i, j-1}` above the diagonal,
/// so that `R_k = P̂_k B`.
pub fn build_b_matrix(h: &KrylovHistory) -> Result<DMatrix<f64>> {
    if !h.is_full() {
        return Err(Error::TruncatedHistory);
    }
    let size = usable(h);
    let mut b = DMatrix::identity(size, size);
    for j in 1..size {
        for i in 0..j {
            b[(i, j)] = h.beta_hat(i, j - 1).ok_or(Error::TruncatedHistory)?;
        }
    }
    Ok(b)
}

/// `(k+2) × (k+1)` lower bidiagonal `H̲` with `1/α̂_j` on the diagonal and
/// `-1/α̂_j` below it, so that `A P̂_k = R_{k+1} H̲`.
pub fn build_h_matrix(h: &KrylovHistory) -> Result<DMatrix<f64>> {
    let cols = h.directions.len().min(h.residuals.len().saturating_sub(1));
    let mut m = DMatrix::zeros(cols + 1, cols);
    for j in 0..cols {
        let a = h.alpha_hat(j);
        if a == 0.0 {
            return Err(Error::ZeroAlpha { index: j });
        }
        m[(j, j)] = 1.0 / a;
        m[(j + 1, j)] = -1.0 / a;
    }
    Ok(m)
}

/// `‖R_k - P̂_k B‖_max / max‖r_i‖`.
pub fn b_reconstruction_error(h: &KrylovHistory) -> Result<f64> {
    let b = build_b_matrix(h)?;
    let size = b.nrows();
    let r = residual_matrix(h, size);
    let p = direction_matrix(h, size);
    Ok(max_abs(&(&r - p * b)) / max_abs(&r).max(f64::MIN_POSITIVE))
}

/// `‖A P̂_k - R_{k+1} H̲‖_max / max‖r_i‖`.
pub fn h_reconstruction_error<A: LinearOperator + ?Sized>(h: &KrylovHistory, a: &A) -> Result<f64> {
    let hm = build_h_matrix(h)?;
    let cols = hm.ncols();
    let ap: Vec<Vector> = (0..cols).map(|j| a.apply(&h.direction_hat(j))).collect();
    let ap = columns(ap.iter(), a.dim());
    let r = residual_matrix(h, cols + 1);
    Ok(max_abs(&(ap - &r * hm)) / max_abs(&r).max(f64::MIN_POSITIVE))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Semiconjugacy {
    /// Largest strictly-lower entry of `RᵀA R`.
    pub lower: f64,
    /// Largest off-diagonal entry, meaningful for symmetric `A`.
    pub off_diagonal: f64,
}

/// Magnitudes of `(RᵀA R)_{ij}`, scaled by `max‖r_i‖ · max‖A r_j‖`.
pub fn check_semiconjugacy<A: LinearOperator + ?Sized>(h: &KrylovHistory, a: &A) -> Semiconjugacy {
    let k = h.residuals.len();
    let ar: Vec<Vector> = h.residuals.iter().map(|r| a.apply(r)).collect();
    let scale = h.residuals.iter().map(|r| r.norm()).fold(0.0, f64::max)
        * ar.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mut out = Semiconjugacy {
        lower: 0.0,
        off_diagonal: 0.0,
    };
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let g = (h.residuals[i].dot(&ar[j]) / scale).abs();
            if i > j {
                out.lower = out.lower.max(g);
            }
            out.off_diagonal = out.off_diagonal.max(g);
        }
    }
    out
}

/// Largest `|β_ij| / ‖A r_{j+1}‖` over pairs with `i < j`: these vanish when
/// `A` is symmetric, leaving only `β_jj`.
pub fn symmetric_beta_violation(h: &KrylovHistory) -> f64 {
    h.betas
        .iter()
        .filter(|((i, j), _)| i < j)
        .map(|(&(_, j), b)| b.abs() / h.image_norms[j + 1])
        .fold(0.0, f64::max)
}

/// For symmetric `A`, `(A R_k)ᵀ (A P̂_k)` is lower bidiagonal. Returns the
/// largest entry outside that pattern over the largest entry inside it.
pub fn ar_ap_bidiagonal_violation<A: LinearOperator + ?Sized>(h: &KrylovHistory, a: &A) -> f64 {
    let size = usable(h);
    let ar: Vec<Vector> = h.residuals[..size].iter().map(|r| a.apply(r)).collect();
    let ap: Vec<Vector> = (0..size).map(|j| a.apply(&h.direction_hat(j))).collect();
    let m = columns(ar.iter(), a.dim()).transpose() * columns(ap.iter(), a.dim());
    let (mut inside, mut outside) = (0.0_f64, 0.0_f64);
    for i in 0..size {
        for j in 0..size {
            if i == j || i == j + 1 {
                inside = inside.max(m[(i, j)].abs());
            } else {
                outside = outside.max(m[(i, j)].abs());
            }
        }
    }
    outside / inside.max(f64::MIN_POSITIVE)
}

/// Deviations of the approximate inverse `B = P Vᵀ` and the projector
/// `π = V Vᵀ` from their defining identities. Entries are relative to the
/// natural scale of each identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedInverseReport {
    /// `A B = π`.
    pub ab_is_projector: f64,
    /// `B π z = A⁻¹ π z`.
    pub b_inverts_on_range: f64,
    /// `π = πᵀ`.
    pub projector_symmetric: f64,
    /// `B A x = x` for `x ∈ span(P)`.
    pub ba_fixes_span: f64,
    /// `(B A)² = B A`.
    pub ba_idempotent: f64,
    /// `Vᵀ A (I - B A) z = 0`: `B A` projects along `A⁻¹ span(V)^⊥`.
    pub oblique_residual: f64,
}

impl InducedInverseReport {
    pub fn max(&self) -> f64 {
        [
            self.ab_is_projector,
            self.b_inverts_on_range,
            self.projector_symmetric,
            self.ba_fixes_span,
            self.ba_idempotent,
            self.oblique_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Builds `B` and `π` from the normalized directions of a run started at
/// `x₀ = 0`, and checks them on `probes` seeded random vectors.
pub fn induced_inverse_checks(
    h: &KrylovHistory,
    a: &DMatrix<f64>,
    probes: usize,
    seed: u64,
) -> Result<InducedInverseReport> {
    let n = a.nrows();
    let p = columns(h.directions.iter(), n);
    let v = columns(h.images.iter(), n);
    let b = &p * v.transpose();
    let pi = &v * v.transpose();
    let lu = a.clone().lu();
    let ba = &b * a;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = |len: usize| Vector::from_fn(len, |_, _| rng.sample::<f64, _>(StandardNormal));

    let mut rep = InducedInverseReport {
        ab_is_projector: max_abs(&(a * &b - &pi)),
        b_inverts_on_range: 0.0,
        projector_symmetric: max_abs(&(&pi - pi.transpose())),
        ba_fixes_span: 0.0,
        ba_idempotent: max_abs(&(&ba * &ba - &ba)) / max_abs(&ba).max(1.0),
        oblique_residual: 0.0,
    };
    for _ in 0..probes {
        let z = gauss(n);
        let piz = &pi * &z;
        let direct = lu.solve(&piz).ok_or(Error::SingularGram)?;
        rep.b_inverts_on_range = rep
            .b_inverts_on_range
            .max((&b * &piz - &direct).norm() / direct.norm().max(f64::MIN_POSITIVE));

        let y = gauss(p.ncols());
        let x = &p * y;
        rep.ba_fixes_span = rep.ba_fixes_span.max((&ba * &x - &x).norm() / x.norm().max(f64::MIN_POSITIVE));

        let e = &z - &ba * &z;
        rep.oblique_residual = rep
            .oblique_residual
            .max((v.transpose() * (a * e)).norm() / (a * &z).norm().max(f64::MIN_POSITIVE));
    }
    Ok(rep)
}
