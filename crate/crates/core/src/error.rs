use thiserror::Error;

use crate::Vector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry in {what}")]
    NonFinite { what: &'static str },

    #[error("direction image is not normalized (norm = {norm:e})")]
    NotNormalized { norm: f64 },

    #[error("trace fevals must not decrease (last {last}, got {got})")]
    TraceOrder { last: usize, got: usize },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    /// `‖Ap‖` (or its nonlinear analogue) collapsed. `resnorm` is the residual
    /// norm at the time of the breakdown; a tiny value means the breakdown was
    /// the lucky kind.
    #[error("breakdown at iteration {iter} (residual norm {resnorm:e})")]
    Breakdown { iter: usize, resnorm: f64 },

    #[error("direction is not a descent direction (slope {slope:e})")]
    NotDescent { slope: f64 },

    #[error("zero direction")]
    ZeroDirection,

    #[error("zero residual: convergence already reached")]
    ZeroResidual,

    #[error("operator declared nonsymmetric")]
    NonSymmetric,

    #[error("history is truncated; the full coefficient table is required")]
    TruncatedHistory,

    #[error("zero step coefficient at index {index}")]
    ZeroAlpha { index: usize },

    #[error("singular Gram matrix")]
    SingularGram,

    #[error("iteration diverged at step {iter} (relative residual {relres:e})")]
    Divergence { iter: usize, relres: f64 },

    #[error("non-finite function value at iteration {iter}")]
    NonFiniteResidual { iter: usize, last_good: Box<Vector> },

    #[error("exponential overflow (argument {arg:e})")]
    Overflow { arg: f64 },

    #[error("atoms {i} and {j} coincide (distance {dist:e})")]
    CoincidentAtoms { i: usize, j: usize, dist: f64 },

    #[error("problem does not provide an exact Jacobian-vector product")]
    NoExactJacobian,

    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Evaluation failures a line search may recover from by shortening the step.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::Overflow { .. } | Error::CoincidentAtoms { .. }
        )
    }
}
