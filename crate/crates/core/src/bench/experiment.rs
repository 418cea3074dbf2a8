use std::thread;

use super::problems::{build_problem, Problem, ProblemFamily, StartKind};
use crate::error::{Error, Result};
use crate::objective::{LipschitzEstimate, QMode};
use crate::solvers::{Method, RunReport, SolverConfig, Termination};
use crate::stepsize::{StepKind, StepRule};

/// One table: a problem generator, a start rule, the dimensions and the methods
/// to compare.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub family: ProblemFamily,
    pub q_mode: QMode,
    pub tau: f64,
    pub start: StartKind,
    pub dims: Vec<usize>,
    pub methods: Vec<Method>,
    /// Step rule; `Fixed` is resolved per cell from the generated problem's `L` and `B`.
    pub step: StepKind,
    /// Solver settings; `solver.step_rule` is overwritten from `step`.
    pub solver: SolverConfig,
}

impl ExperimentSpec {
    pub fn new(name: impl Into<String>, family: ProblemFamily, start: StartKind) -> Self {
        Self {
            name: name.into(),
            family,
            q_mode: family.default_q_mode(),
            tau: 10.0,
            start,
            dims: vec![5, 10, 20, 50, 100],
            methods: Method::ALL.to_vec(),
            step: StepKind::Armijo,
            solver: SolverConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(Error::Config("dims must be a nonempty list of positive sizes".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("no methods selected".into()));
        }
        if !(self.tau > 0.0) {
            return Err(Error::Config(format!("tau = {} must be positive", self.tau)));
        }
        SolverConfig {
            step_rule: StepRule::Armijo,
            ..self.solver
        }
        .validate()
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: Method,
    pub m: usize,
    pub it: usize,
    pub calc: u64,
    pub reached: bool,
    /// The gap at the iteration cap, for cells that did not reach the target.
    pub gap_at_cap: Option<f64>,
    pub value_calls: u64,
}

impl ResultRow {
    pub fn from_report(m: usize, report: &RunReport) -> Self {
        let reached = report.terminated_by == Termination::GapReached;
        Self {
            method: report.method,
            m,
            it: report.iterations,
            calc: report.partial_calls,
            reached,
            gap_at_cap: (!reached).then_some(report.final_gap),
            value_calls: report.value_calls,
        }
    }
}

/// A finished cell with its full run report.
#[derive(Debug, Clone)]
pub struct CellRun {
    pub row: ResultRow,
    pub report: RunReport,
    /// The Lipschitz estimate behind a fixed step, when one was used.
    pub lipschitz: Option<LipschitzEstimate>,
}

/// Runs every (method, m) cell, one thread per cell. Results are sorted by
/// method, then m.
pub fn run_cells(spec: &ExperimentSpec) -> Result<Vec<CellRun>> {
    spec.validate()?;
    let cells: Vec<(Method, usize)> = spec
        .methods
        .iter()
        .flat_map(|&method| spec.dims.iter().map(move |&m| (method, m)))
        .collect();
    let results: Vec<Result<CellRun>> = thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .map(|&(method, m)| scope.spawn(move || run_cell(spec, method, m)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark cell panicked"))
            .collect()
    });
    let mut out = results.into_iter().collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|c| (c.row.method, c.row.m));
    Ok(out)
}

pub fn run_cell(spec: &ExperimentSpec, method: Method, m: usize) -> Result<CellRun> {
    let problem = build_problem(spec.family, m, spec.q_mode, spec.tau)?;
    let start = spec.start.point(&problem.domain);
    let (step_rule, lipschitz) = resolve_step(spec.step, &problem)?;
    let config = SolverConfig {
        step_rule,
        ..spec.solver
    };
    let report = method.solve(&problem.domain, problem.objective.as_ref(), &config, &start)?;
    Ok(CellRun {
        row: ResultRow::from_report(m, &report),
        report,
        lipschitz,
    })
}

/// Turns a step-rule name into a rule for `problem`; `Fixed` needs the
/// objective's Lipschitz estimate and the domain diameter.
pub fn resolve_step(kind: StepKind, problem: &Problem) -> Result<(StepRule, Option<LipschitzEstimate>)> {
    Ok(match kind {
        StepKind::Armijo => (StepRule::Armijo, None),
        StepKind::Divergent => (StepRule::Divergent, None),
        StepKind::Fixed => {
            let est = problem.objective.lipschitz(&problem.domain).ok_or_else(|| {
                Error::Config(format!("{} has no Lipschitz estimate for a fixed step", problem.family))
            })?;
            let rule = StepRule::FixedLipschitz {
                lipschitz: est.value,
                diameter: problem.domain.diameter().value(),
            };
            (rule, Some(est))
        }
    })
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    Ok(run_cells(spec)?.into_iter().map(|c| c.row).collect())
}
