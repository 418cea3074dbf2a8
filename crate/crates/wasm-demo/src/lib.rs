//! Browser bindings. Every export takes plain numbers and strings and returns
//! a JSON string, so the page needs no generated glue beyond wasm-bindgen's.

use pvm::bench::{build_problem, Problem, ProblemFamily, StartKind};
use pvm::diagnostics::{check_stationarity, gap};
use pvm::{Method, RunReport, SolverConfig, StopCriteria, ToleranceSchedule};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Upper limit on `m` so a click cannot freeze the tab.
const MAX_DIM: usize = 200;

#[derive(Serialize)]
struct Run {
    method: String,
    it: usize,
    calc: u64,
    reached: bool,
    final_gap: f64,
    f: Vec<f64>,
    /// `(iteration, gap)` samples.
    gaps: Vec<(usize, f64)>,
    /// Final coordinates, only for `m <= 3` so the page can draw them.
    point: Option<Vec<f64>>,
    /// Iterates, only for `m <= 3`.
    path: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct Check {
    f: f64,
    gap: f64,
    stationary: bool,
    violation: f64,
    witness: Option<(usize, usize)>,
    atom_values: Vec<f64>,
}

fn err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

fn problem(family: &str, m: usize, tau: f64) -> Result<Problem, JsError> {
    if m == 0 || m > MAX_DIM {
        return Err(err(format!("m must lie in 1..={MAX_DIM}")));
    }
    let family: ProblemFamily = family.parse().map_err(err)?;
    build_problem(family, m, family.default_q_mode(), tau).map_err(err)
}

fn config(delta0: f64, eps0: f64, max_iterations: usize) -> SolverConfig {
    SolverConfig {
        schedule: ToleranceSchedule { delta0, eps0, nu: 0.5 },
        stop: StopCriteria {
            max_inner_iterations: max_iterations,
            ..StopCriteria::default()
        },
        gap_check_every: 1,
        ..SolverConfig::default()
    }
}

/// Replays the accepted steps to recover every iterate.
fn iterates(p: &Problem, start: StartKind, report: &RunReport) -> Vec<Vec<f64>> {
    let mut wp = start.point(&p.domain);
    let mut out = vec![wp.point().to_vec()];
    for s in &report.steps {
        match s.from {
            Some(i) => wp.transfer(&p.domain, i, s.to, s.step),
            None => wp.blend(&p.domain, s.to, s.step),
        }
        out.push(wp.point().to_vec());
    }
    out
}

fn run_one(p: &Problem, method: Method, start: StartKind, cfg: &SolverConfig) -> Result<Run, JsError> {
    let r = method
        .solve(&p.domain, p.objective.as_ref(), cfg, &start.point(&p.domain))
        .map_err(err)?;
    let small = p.domain.dim() <= 3;
    Ok(Run {
        method: method.to_string(),
        it: r.iterations,
        calc: r.partial_calls,
        reached: r.reached_target(),
        final_gap: r.final_gap,
        point: small.then(|| r.final_point.point().to_vec()),
        path: small.then(|| iterates(p, start, &r)),
        gaps: r.gap_trajectory.iter().map(|g| (g.iteration, g.gap)).collect(),
        f: r.f_trajectory,
    })
}

/// Runs one method and returns its trajectory.
#[wasm_bindgen]
pub fn solve(
    family: &str,
    m: usize,
    method: &str,
    start: &str,
    delta0: f64,
    eps0: f64,
    max_iterations: usize,
) -> Result<String, JsError> {
    let p = problem(family, m, 10.0)?;
    let method: Method = method.parse().map_err(err)?;
    let start: StartKind = start.parse().map_err(err)?;
    let run = run_one(&p, method, start, &config(delta0, eps0, max_iterations))?;
    serde_json::to_string(&run).map_err(err)
}

/// Runs all three methods on the same problem.
#[wasm_bindgen]
pub fn compare(family: &str, m: usize, start: &str, delta0: f64, eps0: f64) -> Result<String, JsError> {
    let p = problem(family, m, 10.0)?;
    let start: StartKind = start.parse().map_err(err)?;
    let cfg = config(delta0, eps0, 500);
    let runs = [Method::Pvm, Method::Mdm, Method::Cgm]
        .into_iter()
        .map(|method| run_one(&p, method, start, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    serde_json::to_string(&runs).map_err(err)
}

/// Gap and stationarity of a point of the plain simplex `{x >= 0, sum x = tau}`.
#[wasm_bindgen]
pub fn check_point(family: &str, coords: &[f64], tau: f64, tol: f64) -> Result<String, JsError> {
    let p = problem(family, coords.len(), tau)?;
    let wp = p.domain.weights_of(coords).map_err(err)?;
    let mut g = vec![0.0; coords.len()];
    p.objective.gradient(wp.point(), &mut g);
    let report = check_stationarity(&p.domain, &wp, &g, tol);
    let check = Check {
        f: p.objective.value(wp.point()),
        gap: gap(&p.domain, &g, wp.point()),
        stationary: report.is_stationary,
        violation: report.worst_violation,
        witness: report.witness,
        atom_values: (0..p.domain.n()).map(|i| p.domain.atom_value(i, &g)).collect(),
    };
    serde_json::to_string(&check).map_err(err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replayed_path_ends_at_final_point() {
        let p = problem("quad-simplex", 3, 1.0).unwrap();
        let run = run_one(&p, Method::Pvm, StartKind::FirstVertex, &config(1.0, 0.5, 500)).unwrap();
        let path = run.path.unwrap();
        assert_eq!(path.len(), run.it + 1);
        let last = path.last().unwrap();
        for (a, b) in last.iter().zip(run.point.as_ref().unwrap()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn compare_returns_three_runs() {
        let p = problem("quad-scaled", 10, 10.0).unwrap();
        let cfg = config(100.0, 0.01, 500);
        for method in Method::ALL {
            let run = run_one(&p, method, StartKind::Uniform, &cfg).unwrap();
            assert!(run.path.is_none());
            assert_eq!(run.f.len(), run.it + 1);
        }
    }
}
