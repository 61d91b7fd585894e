//! Benchmark problems.

pub mod bratu;
pub mod lennard_jones;
pub mod linear;
pub mod logreg;

pub use bratu::BratuProblem;
pub use lennard_jones::{fcc_init, LennardJonesProblem};
pub use linear::{make_linear_problem, LinearKind};
pub use logreg::LogRegProblem;
