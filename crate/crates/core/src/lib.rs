//! Nonlinear truncated generalized conjugate residual acceleration.
//!
//! The crate solves `f(x) = 0` with nlTGCR(m), a windowed Krylov-style
//! accelerator in which every stored direction `p_i` is paired with its
//! Jacobian image `v_i = J(x_i) p_i`. Around it sit the linear ancestors
//! ([`linear`]), a matrix-free Jacobian probe, a backtracking line search,
//! the usual comparison solvers ([`baselines`]), benchmark problems
//! ([`problems`]) and the harness behind the `bench` binary ([`bench`]).

pub mod baselines;
pub mod bench;
pub mod error;
pub mod jacobian;
pub mod linear;
pub mod linesearch;
pub mod nltgcr;
pub mod options;
pub mod problem;
pub mod problems;
pub mod solution;
pub mod trace;
pub mod vector;
pub mod window;

pub use error::{Error, Result};
pub use jacobian::{descent_check, frechet_jv, JvMode, JvProbe};
pub use linesearch::{backtrack, update_alpha0, LineSearchOptions};
pub use nltgcr::{nltgcr_solve, IterationReport, NltgcrSolution, NltgcrState, StepStatus};
pub use options::{SlopeEstimate, SolverOptions, Variant};
pub use problem::{AffineProblem, CountingProblem, FnProblem, NonlinearProblem};
pub use solution::{ModeSwitch, Solution};
pub use trace::{ConvergenceTrace, Mode, TraceRecord};
pub use vector::Vector;
pub use window::WindowPair;
