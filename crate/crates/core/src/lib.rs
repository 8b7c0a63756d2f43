//! Non-Euclidean extragradient methods for generalized monotone variational
//! inequalities over the probability simplex.
//!
//! Find `x*` in the simplex with `<F(x*), x - x*> >= 0` for every `x`, using
//! N-EG (fixed stepsize) or N-EG-LS (backtracking), each in the Euclidean,
//! entropy or p-norm geometry.

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod geometry;
#[cfg(any(test, feature = "oracle"))]
pub mod oracle;
pub mod problems;
pub mod solvers;

pub use error::{GmviError, Result};
pub use geometry::{Geometry, GeometryChoice, GeometryKind};
pub use problems::{Family, Point, ProblemInstance};
pub use solvers::{Algorithm, RunResult, RunStatus, SolverConfig};
