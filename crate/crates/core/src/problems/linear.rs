//! Seeded dense linear systems with controlled spectra.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linear::DenseOperator;
use crate::vector::Vector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearKind {
    /// Eigenvalues in `[1, 10]`.
    Spd,
    /// `S + K` with `S` as in `Spd` and `K` skew-symmetric, so the
    /// symmetric part is positive definite.
    Nonsymmetric,
    /// Symmetric with eigenvalue magnitudes in `[1, 10]` and both signs.
    Indefinite,
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.sample(StandardNormal))
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    gaussian_matrix(rng, n).qr().q()
}

fn with_spectrum(q: &DMatrix<f64>, eig: &DVector<f64>) -> DMatrix<f64> {
    let m = q * DMatrix::from_diagonal(eig) * q.transpose();
    // exact symmetry, not just up to roundoff
    (&m + m.transpose()) * 0.5
}

/// Operator and right-hand side. The operator is declared symmetric for the
/// symmetric kinds.
pub fn make_linear_problem(kind: LinearKind, n: usize, seed: u64) -> (DenseOperator, Vector) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(&mut rng, n);
    let eig = DVector::from_fn(n, |_, _| rng.random_range(1.0..=10.0));
    let op = match kind {
        LinearKind::Spd => DenseOperator::symmetric(with_spectrum(&q, &eig)),
        LinearKind::Indefinite => {
            let signed = DVector::from_fn(n, |i, _| if i % 2 == 0 { eig[i] } else { -eig[i] });
            DenseOperator::symmetric(with_spectrum(&q, &signed))
        }
        LinearKind::Nonsymmetric => {
            let g = gaussian_matrix(&mut rng, n);
            let skew = (&g - g.transpose()) * (0.5 / (n as f64).sqrt());
            DenseOperator::new(with_spectrum(&q, &eig) + skew)
        }
    };
    let b = Vector::from_fn(n, |_, _| rng.sample(StandardNormal));
    (op, b)
}
