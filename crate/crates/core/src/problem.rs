//! The function-oracle contract shared by all solvers.

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;

use crate::error::Result;
use crate::vector::{ensure_dim, ensure_finite, Vector};

/// A system `f(x) = 0`, optionally the gradient of a potential `φ`.
pub trait NonlinearProblem {
    fn dim(&self) -> usize;

    fn eval_f(&self, x: &Vector) -> Result<Vector>;

    /// `J(x) p`, when the problem can supply it exactly.
    fn exact_jv(&self, _x: &Vector, _p: &Vector) -> Option<Result<Vector>> {
        None
    }

    fn eval_phi(&self, _x: &Vector) -> Option<Result<f64>> {
        None
    }

    /// `s` in `f = s ∇φ`. Problems posed as `-∇φ = 0` return `-1`.
    fn gradient_sign(&self) -> f64 {
        1.0
    }
}

impl<P: NonlinearProblem + ?Sized> NonlinearProblem for &P {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        (**self).eval_f(x)
    }
    fn exact_jv(&self, x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        (**self).exact_jv(x, p)
    }
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        (**self).eval_phi(x)
    }
    fn gradient_sign(&self) -> f64 {
        (**self).gradient_sign()
    }
}

/// `f(x)` with dimension and finiteness checks on both sides.
pub fn evaluate<P: NonlinearProblem + ?Sized>(prob: &P, x: &Vector) -> Result<Vector> {
    ensure_dim(x, prob.dim())?;
    ensure_finite(x, "iterate")?;
    let f = prob.eval_f(x)?;
    ensure_dim(&f, prob.dim())?;
    ensure_finite(&f, "function value")?;
    Ok(f)
}

type VecFn<'a> = Box<dyn Fn(&Vector) -> Vector + Send + Sync + 'a>;
type JvFn<'a> = Box<dyn Fn(&Vector, &Vector) -> Vector + Send + Sync + 'a>;
type PhiFn<'a> = Box<dyn Fn(&Vector) -> f64 + Send + Sync + 'a>;

/// A problem assembled from closures.
pub struct FnProblem<'a> {
    dim: usize,
    f: VecFn<'a>,
    jv: Option<JvFn<'a>>,
    phi: Option<PhiFn<'a>>,
    sign: f64,
}

impl<'a> FnProblem<'a> {
    pub fn new(dim: usize, f: impl Fn(&Vector) -> Vector + Send + Sync + 'a) -> Self {
        Self {
            dim,
            f: Box::new(f),
            jv: None,
            phi: None,
            sign: 1.0,
        }
    }

    pub fn with_jv(mut self, jv: impl Fn(&Vector, &Vector) -> Vector + Send + Sync + 'a) -> Self {
        self.jv = Some(Box::new(jv));
        self
    }

    /// Declares `f = sign ∇φ`.
    pub fn with_phi(mut self, phi: impl Fn(&Vector) -> f64 + Send + Sync + 'a, sign: f64) -> Self {
        self.phi = Some(Box::new(phi));
        self.sign = sign;
        self
    }
}

impl NonlinearProblem for FnProblem<'_> {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        Ok((self.f)(x))
    }
    fn exact_jv(&self, x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        self.jv.as_ref().map(|jv| Ok(jv(x, p)))
    }
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        self.phi.as_ref().map(|phi| Ok(phi(x)))
    }
    fn gradient_sign(&self) -> f64 {
        self.sign
    }
}

/// `f(x) = A x - b`.
#[derive(Debug, Clone)]
pub struct AffineProblem {
    pub a: DMatrix<f64>,
    pub b: Vector,
    /// Expose `A p` as an exact Jacobian product.
    pub exact_jv: bool,
}

impl AffineProblem {
    pub fn new(a: DMatrix<f64>, b: Vector) -> Self {
        assert_eq!(a.nrows(), b.len(), "A and b disagree in size");
        assert_eq!(a.nrows(), a.ncols(), "A must be square");
        Self { a, b, exact_jv: false }
    }

    pub fn with_exact_jv(mut self) -> Self {
        self.exact_jv = true;
        self
    }

    fn is_symmetric(&self) -> bool {
        self.a == self.a.transpose()
    }
}

impl NonlinearProblem for AffineProblem {
    fn dim(&self) -> usize {
        self.b.len()
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        Ok(&self.a * x - &self.b)
    }
    fn exact_jv(&self, _x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        self.exact_jv.then(|| Ok(&self.a * p))
    }
    /// `½ xᵀA x - bᵀx`, defined only for symmetric `A`.
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        self.is_symmetric()
            .then(|| Ok(0.5 * x.dot(&(&self.a * x)) - self.b.dot(x)))
    }
}

/// Counts raw calls into the wrapped problem, independently of any solver's
/// own bookkeeping.
#[derive(Debug)]
pub struct CountingProblem<P> {
    inner: P,
    f_calls: AtomicUsize,
    jv_calls: AtomicUsize,
}

impl<P: NonlinearProblem> CountingProblem<P> {
    pub fn new(inner: P) -> Self {
        Self {
            inner,
            f_calls: AtomicUsize::new(0),
            jv_calls: AtomicUsize::new(0),
        }
    }

    pub fn f_calls(&self) -> usize {
        self.f_calls.load(Ordering::Relaxed)
    }

    pub fn jv_calls(&self) -> usize {
        self.jv_calls.load(Ordering::Relaxed)
    }

    pub fn reset(&self) {
        self.f_calls.store(0, Ordering::Relaxed);
        self.jv_calls.store(0, Ordering::Relaxed);
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: NonlinearProblem> NonlinearProblem for CountingProblem<P> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn eval_f(&self, x: &Vector) -> Result<Vector> {
        self.f_calls.fetch_add(1, Ordering::Relaxed);
        self.inner.eval_f(x)
    }
    fn exact_jv(&self, x: &Vector, p: &Vector) -> Option<Result<Vector>> {
        let out = self.inner.exact_jv(x, p);
        if out.is_some() {
            self.jv_calls.fetch_add(1, Ordering::Relaxed);
        }
        out
    }
    fn eval_phi(&self, x: &Vector) -> Option<Result<f64>> {
        self.inner.eval_phi(x)
    }
    fn gradient_sign(&self) -> f64 {
        self.inner.gradient_sign()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn evaluate_rejects_nan_and_bad_dims() {
        let p = FnProblem::new(2, |x| x.map(|v| v.ln()));
        assert!(matches!(
            evaluate(&p, &Vector::from_vec(vec![-1.0, 1.0])),
            Err(Error::NonFinite { .. })
        ));
        assert!(matches!(
            evaluate(&p, &Vector::from_vec(vec![1.0])),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            evaluate(&p, &Vector::from_vec(vec![f64::NAN, 1.0])),
            Err(Error::NonFinite { what: "iterate" })
        ));
    }

    #[test]
    fn affine_phi_only_when_symmetric() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let p = AffineProblem::new(a, Vector::from_vec(vec![1.0, 1.0]));
        let x = Vector::from_vec(vec![1.0, 0.0]);
        assert_eq!(p.eval_phi(&x).unwrap().unwrap(), 0.0);
        let n = AffineProblem::new(DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]), Vector::zeros(2));
        assert!(n.eval_phi(&x).is_none());
        assert!(n.exact_jv(&x, &x).is_none());
    }

    #[test]
    fn counting_wrapper_counts() {
        let p = CountingProblem::new(FnProblem::new(1, |x| x.clone()));
        let x = Vector::from_vec(vec![1.0]);
        evaluate(&p, &x).unwrap();
        evaluate(&p, &x).unwrap();
        assert_eq!(p.f_calls(), 2);
        p.reset();
        assert_eq!(p.f_calls(), 0);
    }
}
