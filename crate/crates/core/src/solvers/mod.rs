//! Iterative methods over atomic domains: the pairwise variation method with
//! tolerances, conditional gradient, and the marginal swap-direction method.

mod cgm;
mod mdm;
mod pvm;
mod select;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

pub use cgm::cgm_solve;
pub use mdm::mdm_solve;
pub use pvm::pvm_solve;
pub use select::{select_pair, PairChoice};

use crate::domain::{AtomicDomain, WeightedPoint};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::stepsize::{ArmijoParams, StepRule};

/// Stage tolerances `delta_l = nu^l delta0`, `eps_l = nu^l eps0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSchedule {
    pub delta0: f64,
    pub eps0: f64,
    pub nu: f64,
}

impl Default for ToleranceSchedule {
    fn default() -> Self {
        Self {
            delta0: 1.0,
            eps0: 0.5,
            nu: 0.5,
        }
    }
}

impl ToleranceSchedule {
    /// `delta_l = eps_l = nu^l delta0`.
    pub fn equal(delta0: f64, nu: f64) -> Self {
        Self {
            delta0,
            eps0: delta0,
            nu,
        }
    }

    pub fn delta(&self, stage: usize) -> f64 {
        self.nu.powi(stage as i32) * self.delta0
    }

    pub fn epsilon(&self, stage: usize) -> f64 {
        self.nu.powi(stage as i32) * self.eps0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta0 > 0.0) {
            return Err(Error::Config(format!("delta0 = {} must be positive", self.delta0)));
        }
        if !(self.eps0 > 0.0 && self.eps0 < 1.0) {
            return Err(Error::Config(format!("eps0 = {} must lie in (0, 1)", self.eps0)));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::Config(format!("nu = {} must lie in (0, 1)", self.nu)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopCriteria {
    /// Stop once the gap function drops to this value.
    pub target_gap: f64,
    /// Cap on the total number of inner iterations.
    pub max_inner_iterations: usize,
    /// Cap on the number of stages (pairwise method only).
    pub max_stages: usize,
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self {
            target_gap: 0.1,
            max_inner_iterations: 500,
            max_stages: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub armijo: ArmijoParams,
    pub step_rule: StepRule,
    pub schedule: ToleranceSchedule,
    pub stop: StopCriteria,
    /// The pairwise method evaluates the gap at every restart and after this many
    /// inner iterations.
    pub gap_check_every: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            armijo: ArmijoParams::default(),
            step_rule: StepRule::Armijo,
            schedule: ToleranceSchedule::default(),
            stop: StopCriteria::default(),
            gap_check_every: 10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        self.armijo.validate()?;
        self.step_rule.validate()?;
        self.schedule.validate()?;
        if !(self.stop.target_gap >= 0.0) {
            return Err(Error::Config("target gap must be nonnegative".into()));
        }
        if self.stop.max_inner_iterations == 0 && self.stop.target_gap <= 0.0 {
            return Err(Error::Config("no active stopping criterion".into()));
        }
        if self.gap_check_every == 0 {
            return Err(Error::Config("gap_check_every must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Cgm,
    Mdm,
    Pvm,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Cgm, Method::Mdm, Method::Pvm];

    pub fn solve(
        self,
        domain: &AtomicDomain,
        objective: &dyn Objective,
        config: &SolverConfig,
        start: &WeightedPoint,
    ) -> Result<RunReport> {
        match self {
            Method::Cgm => cgm_solve(domain, objective, config, start),
            Method::Mdm => mdm_solve(domain, objective, config, start),
            Method::Pvm => pvm_solve(domain, objective, config, start),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cgm" => Ok(Method::Cgm),
            "mdm" => Ok(Method::Mdm),
            "pvm" => Ok(Method::Pvm),
            _ => Err(Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cgm => "CGM",
            Method::Mdm => "MDM",
            Method::Pvm => "PVM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    GapReached,
    IterationCap,
    StageCap,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::GapReached => "gap_reached",
            Termination::IterationCap => "iteration_cap",
            Termination::StageCap => "stage_cap",
        })
    }
}

/// One accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Stage `l` (always 0 for the single-level methods).
    pub stage: usize,
    /// Inner index `k` within the stage.
    pub k: usize,
    /// Atom losing weight; `None` for conditional-gradient steps.
    pub from: Option<usize>,
    pub to: usize,
    /// Upper end `gamma_k` of the step interval.
    pub gamma: f64,
    /// Accepted `lambda_k`.
    pub step: f64,
    /// Directional derivative `mu_k = <f'(x^k), d^k>`.
    pub slope: f64,
    /// `delta_l` for the pairwise method, 0 otherwise.
    pub threshold: f64,
    pub f_before: f64,
    pub f_after: f64,
    /// Partial-derivative count after the step.
    pub partial_calls: u64,
}

/// State at the end of a stage of the pairwise method.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartRecord {
    pub stage: usize,
    /// Inner iterations spent in this stage.
    pub inner_iterations: usize,
    /// Inner iterations over all stages so far.
    pub total_iterations: usize,
    pub delta: f64,
    pub epsilon: f64,
    /// `Delta(w^l)`.
    pub gap: f64,
    pub f: f64,
    /// `max_{i in I_eps} <g, z^i> - min_j <g, z^j>` from an independent full
    /// gradient; `None` when no weight reaches `eps`.
    pub certificate: Option<f64>,
    /// The restart point `w^l`.
    pub point: WeightedPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSample {
    pub iteration: usize,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub method: Method,
    /// Total inner steps (`it`).
    pub iterations: usize,
    /// Partial-derivative evaluations charged to the optimization (`calc`).
    pub partial_calls: u64,
    pub value_calls: u64,
    /// `f(x^k)` for `k = 0..=iterations`.
    pub f_trajectory: Vec<f64>,
    pub gap_trajectory: Vec<GapSample>,
    pub restarts: Vec<RestartRecord>,
    pub steps: Vec<StepRecord>,
    pub final_point: WeightedPoint,
    pub final_gap: f64,
    pub terminated_by: Termination,
}

impl RunReport {
    pub fn reached_target(&self) -> bool {
        self.terminated_by == Termination::GapReached
    }

    /// One row per accepted step: `stage,k,i,j,lambda,f,calc`.
    pub fn write_trace_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(["stage", "k", "i", "j", "lambda", "f", "calc"]).map_err(io)?;
        for s in &self.steps {
            w.write_record([
                s.stage.to_string(),
                s.k.to_string(),
                s.from.map(|i| i.to_string()).unwrap_or_default(),
                s.to.to_string(),
                format!("{:e}", s.step),
                format!("{:.12e}", s.f_after),
                s.partial_calls.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_start(domain: &AtomicDomain, objective: &dyn Objective, start: &WeightedPoint) -> Result<()> {
    if objective.dim() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: objective.dim(),
        });
    }
    if start.point().len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            got: start.point().len(),
        });
    }
    if start.weights().keys().any(|&i| i >= domain.n()) {
        return Err(Error::Domain("start weights reference a missing atom".into()));
    }
    let (sum_err, min_u, recon) = start.integrity(domain);
    if sum_err > 1e-9 || !(min_u > 0.0) || recon > 1e-9 * (1.0 + max_abs(start.point())) {
        return Err(Error::Domain("start point is not a valid convex combination".into()));
    }
    Ok(())
}

fn max_abs(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).fold(0.0, f64::max)
}
