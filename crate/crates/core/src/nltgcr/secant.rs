//! The window read as a quasi-Newton model: `G = P Vᵀ` approximates the
//! inverse Jacobian and satisfies `G v_i = p_i` for every stored pair.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::vector::Vector;
use crate::window::WindowPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantReport {
    /// `maxᵢ ‖G vᵢ - pᵢ‖ / maxᵢ ‖pᵢ‖`.
    pub secant: f64,
    /// `‖G q‖ / (‖q‖ maxᵢ ‖pᵢ‖)` for a random `q ⟂ span(V)`.
    pub no_change: f64,
}

impl SecantReport {
    pub fn max(&self) -> f64 {
        self.secant.max(self.no_change)
    }
}

fn largest_p(w: &WindowPair) -> f64 {
    w.p_cols().map(|p| p.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE)
}

pub fn secant_property_check(w: &WindowPair, seed: u64) -> SecantReport {
    if w.is_empty() {
        return SecantReport {
            secant: 0.0,
            no_change: 0.0,
        };
    }
    let scale = largest_p(w);
    let secant = w
        .p_cols()
        .zip(w.v_cols())
        .map(|(p, v)| (w.apply_inverse_model(v) - p).norm())
        .fold(0.0, f64::max)
        / scale;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = Vector::from_fn(w.dim(), |_, _| rng.sample::<f64, _>(StandardNormal));
    for _ in 0..2 {
        for v in w.v_cols() {
            let c = q.dot(v);
            q.axpy(-c, v, 1.0);
        }
    }
    let no_change = w.apply_inverse_model(&q).norm() / (q.norm() * scale);
    SecantReport { secant, no_change }
}

/// Among all `G'` with `G' V = P`, `P Vᵀ` has the least Frobenius norm.
/// Every such `G'` is `P Vᵀ + Z (I - V Vᵀ)`; this draws `samples` random `Z`
/// and returns the smallest `‖G'‖_F - ‖P Vᵀ‖_F`, which must be
/// non-negative. Dense, so only for small `n`.
pub fn frobenius_minimality_margin(w: &WindowPair, samples: usize, seed: u64) -> f64 {
    let n = w.dim();
    let p = w.p_matrix();
    let v = w.v_matrix();
    let g = &p * v.transpose();
    let proj = DMatrix::identity(n, n) - &v * v.transpose();
    let base = g.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let z = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            (&g + z * &proj).norm() - base
        })
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_exact() {
        let mut w = WindowPair::new(1).unwrap();
        let v = Vector::from_vec(vec![0.6, 0.8, 0.0]);
        let p = Vector::from_vec(vec![1.0, -2.0, 0.5]);
        w.push(p.clone(), v.clone()).unwrap();
        let rep = secant_property_check(&w, 0);
        assert!(rep.secant <= 1e-15);
        assert!(rep.no_change <= 1e-15);
        assert!(frobenius_minimality_margin(&w, 10, 1) >= 0.0);
    }

    #[test]
    fn empty_window_is_trivially_fine() {
        assert_eq!(secant_property_check(&WindowPair::new(2).unwrap(), 0).max(), 0.0);
    }
}
