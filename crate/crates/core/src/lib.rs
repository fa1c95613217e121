//! Smooth optimization under linear equality constraints,
//! `min f(x) s.t. A x = b`, by regularization continuation with
//! trust-region time-step control.
//!
//! ```
//! use rcmtr::{problems, solve, SolverConfig, Status};
//!
//! let problem = problems::problem("booth", None).unwrap();
//! let report = solve(&problem, &SolverConfig::default()).unwrap();
//! assert_eq!(report.status, Status::Converged);
//! assert!((report.f_star - 9.0).abs() < 1e-6);
//! ```

// `!(a > b)` is used on purpose so that NaN falls on the rejecting side
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baseline;
mod clock;
pub mod error;
pub mod hessian;
pub mod lbfgs;
pub mod problems;
pub mod projection;
pub mod serde_float;
pub mod solver;

pub use error::{Error, Result};
pub use lbfgs::{make_pair, LbfgsPair};
pub use problems::{build_constraints, catalog, quadratic_oracle, Objective, ProblemInstance};
pub use projection::{factor, ConstraintSystem, ProjectorBasis, Residuals};
pub use solver::{
    solve, solve_with_observer, HessianMode, IterationRecord, Phase, SolverConfig, SolverReport,
    SolverState, Status, StepEvent,
};
