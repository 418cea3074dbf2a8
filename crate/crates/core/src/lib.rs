//! Projection-free minimization of smooth functions over polytopes given by
//! their atoms (vertices).
//!
//! The main solver is the pairwise variation method with tolerances
//! ([`solvers::pvm_solve`]): it moves weight between two atoms at a time,
//! accepts a pair only when the directional margin clears a stage threshold,
//! and shrinks the thresholds at each restart. Conditional gradient and the
//! marginal swap-direction method are provided as baselines, together with the
//! diagnostics and benchmark harness used to compare them.

// NaN must fail validation, so `!(x > 0.0)` is intended; index loops mirror the formulas
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bench;
pub mod diagnostics;
pub mod domain;
pub mod error;
pub mod objective;
pub mod solvers;
pub mod stepsize;

pub use domain::{AtomChoice, AtomSet, AtomicDomain, DiameterBound, WeightedPoint};
pub use error::{Error, Result};
pub use objective::{
    ConvexBarrierObjective, Counters, GradientOracle, LinearObjective, LipschitzEstimate, Objective,
    QMode, QuadraticObjective,
};
pub use solvers::{Method, RunReport, SolverConfig, StopCriteria, Termination, ToleranceSchedule};
pub use stepsize::{ArmijoParams, StepKind, StepRule};
