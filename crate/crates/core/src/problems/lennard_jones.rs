//! Lennard-Jones cluster in reduced units (`ε = σ = 1`):
//! `E = Σ_{i<j} 4 (r_ij⁻¹² - r_ij⁻⁶)`. The system solved is `∇E = 0`.
//!
//! Positions are flattened as `[x₀, y₀, z₀, x₁, …]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::problem::NonlinearProblem;
use crate::vector::{ensure_dim, Vector};

const MIN_DISTANCE: f64 = 1e-8;

/// Spacing of an FCC lattice whose nearest neighbours sit at the pair
/// minimum `2^{1/6}`.
pub fn equilibrium_lattice_constant() -> f64 {
    2f64.powf(1.0 / 6.0) * 2f64.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LennardJonesProblem {
    pub cells_per_side: usize,
    pub lattice_constant: f64,
    pub perturbation_scale: f64,
    pub rng_seed: u64,
}

impl Default for LennardJonesProblem {
    fn default() -> Self {
        Self {
            cells_per_side: 3,
            lattice_constant: equilibrium_lattice_constant(),
            perturbation_scale: 0.05,
            rng_seed: 7,
        }
    }
}

impl LennardJonesProblem {
    pub fn atoms(&self) -> usize {
        4 * self.cells_per_side.pow(3)
    }

    /// Perturbed FCC start, reproducible from `rng_seed`.
    pub fn initial_positions(&self) -> Vector {
        fcc_init(self.cells_per_side, self.lattice_constant, self.perturbation_scale, self.rng_seed)
    }

    /// Pair distance vectors and squared lengths, with the coincidence check.
    fn pairs(&self, pos: &Vector) -> Result<Vec<(usize, usize, [f64; 3], f64)>> {
        ensure_dim(pos, self.dim())?;
        let n = self.atoms();
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                let d = [
                    pos[3 * i] - pos[3 * j],
                    pos[3 * i + 1] - pos[3 * j + 1],
                    pos[3 * i + 2] - pos[3 * j + 2],
                ];
                let s = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
                if s.sqrt() < MIN_DISTANCE {
                    return Err(Error::CoincidentAtoms { i, j, dist: s.sqrt() });
                }
                out.push((i, j, d, s));
            }
        }
        Ok(out)
    }

    pub fn energy(&self, pos: &Vector) -> Result<f64> {
        Ok(self
            .pairs(pos)?
            .iter()
            .map(|&(_, _, _, s)| {
                let inv6 = 1.0 / (s * s * s);
                4.0 * (inv6 * inv6 - inv6)
            })
            .sum())
    }

    pub fn gradient(&self, pos: &Vector) -> Result<Vector> {
        let mut g = Vector::zeros(self.dim());
        for (i, j, d, s) in self.pairs(pos)? {
            // E(s) = 4(s⁻⁶ - s⁻³) with s = r², ∇ᵢE = 2 E'(s) d
            let coef = 2.0 * de_ds(s);
            for c in 0..3 {
                g[3 * i + c] += coef * d[c];
                g[3 * j + c] -= coef * d[c];
            }
        }
        Ok(g)
    }

    /// `∇²E · p`.
    pub fn hessian_vec(&self, pos: &Vector, p: &Vector) -> Result<Vector> {
        ensure_dim(p, self.dim())?;
        let mut out = Vector::zeros(self.dim());
        for (i, j, d, s) in self.pairs(pos)? {
            let w = [p[3 * i] - p[3 * j], p[3 * i + 1] - p[3 * j + 1], p[3 * i + 2] - p[3 * j + 2]];
            let dw = d[0] * w[0] + d[1] * w[1] + d[2] * w[2];
            let a = 2.0 * de_ds(s);
            let b = 4.0 * d2e_ds2(s) * dw;
            for c in 0..3 {
                let h = a * w[c] + b * d[c];
                out[3 * i + c] += h;
                out[3 * j + c] -= h;
            }
        }
        Ok(out)
    }
}

fn de_ds(s: f64) -> f64 {
    4.0 * (-6.0 * s.powi(-7) + 3.0 * s.powi(-4))
}

fn d2e_ds2(s: f64) -> f64 {
    4.0 * (42.0 * s.powi(-8) - 12.0 * s.powi(-5))
}

/// FCC lattice with `cells³` cubic cells of side `a` and a four-atom basis,
/// each coordinate shifted by an independent uniform draw in
/// `[-scale, scale]`.
pub fn fcc_init(cells: usize, a: f64, scale: f64, seed: u64) -> Vector {
    const BASIS: [[f64; 3]; 4] = [[0.0, 0.0, 0.0], [0.5, 0.5, 0.0], [0.5, 0.0, 0.5], [0.0, 0.5, 0.5]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos = Vec::with_capacity(12 * cells.pow(3));
    for ix in 0..cells {
        for iy in 0..cells {
            for iz in 0..cells {
                for b in BASIS {
                    for (c, cell) in [ix, iy, iz].into_iter().enumerate() {
                        let jitter = if scale > 0.0 { rng.random_range(-scale..=scale) } else { 0.0 };
                        pos.push(a * (cell as f64 + b[c]) + jitter);
                    }
                }
            }
        }
    }
    Vector::from_vec(pos)
}

impl NonlinearProblem for LennardJonesProblem {
    fn dim(&self) -> usize {
        3 * self.atoms()
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        self.gradient(x)
    }
    fn exact_jv(&self, x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        Some(self.hessian_vec(x, p))
    }
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        Some(self.energy(x))
    }
}
