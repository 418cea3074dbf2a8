use std::path::Path;

use serde::Deserialize;

use super::experiment::ExperimentSpec;
use super::problems::{ProblemFamily, StartKind};
use crate::error::{Error, Result};
use crate::objective::QMode;
use crate::solvers::Method;
use crate::stepsize::StepKind;

/// TOML layout of an experiment file. Every solver key is optional and falls
/// back to the library default.
///
/// ```toml
/// name = "small"
/// problem = "quad-simplex"
/// start = "uniform"
/// dims = [5, 10]
/// methods = ["pvm", "mdm"]
///
/// [solver]
/// delta0 = 100.0
/// eps0 = 0.01
/// target_gap = 0.1
/// ```
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileSpec {
    name: Option<String>,
    problem: String,
    q: Option<String>,
    tau: Option<f64>,
    start: Option<String>,
    dims: Option<Vec<usize>>,
    methods: Option<Vec<String>>,
    #[serde(default)]
    solver: SolverSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolverSection {
    step: Option<String>,
    beta: Option<f64>,
    theta: Option<f64>,
    max_backtracks: Option<usize>,
    delta0: Option<f64>,
    eps0: Option<f64>,
    nu: Option<f64>,
    target_gap: Option<f64>,
    max_iterations: Option<usize>,
    max_stages: Option<usize>,
    gap_check_every: Option<usize>,
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<ExperimentSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<ExperimentSpec> {
    let file: FileSpec = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let family: ProblemFamily = file.problem.parse()?;
    let start = match file.start {
        Some(s) => s.parse()?,
        None => StartKind::Uniform,
    };
    let mut spec = ExperimentSpec::new(file.name.unwrap_or_else(|| "custom".into()), family, start);
    if let Some(q) = file.q {
        spec.q_mode = q.parse::<QMode>()?;
    }
    if let Some(tau) = file.tau {
        spec.tau = tau;
    }
    if let Some(dims) = file.dims {
        spec.dims = dims;
    }
    if let Some(methods) = file.methods {
        spec.methods = methods.iter().map(|m| m.parse()).collect::<Result<Vec<Method>>>()?;
    }
    let s = file.solver;
    if let Some(step) = s.step {
        spec.step = step.parse::<StepKind>()?;
    }
    let cfg = &mut spec.solver;
    set(&mut cfg.armijo.beta, s.beta);
    set(&mut cfg.armijo.theta, s.theta);
    set(&mut cfg.armijo.max_backtracks, s.max_backtracks);
    set(&mut cfg.schedule.delta0, s.delta0);
    set(&mut cfg.schedule.eps0, s.eps0);
    set(&mut cfg.schedule.nu, s.nu);
    set(&mut cfg.stop.target_gap, s.target_gap);
    set(&mut cfg.stop.max_inner_iterations, s.max_iterations);
    set(&mut cfg.stop.max_stages, s.max_stages);
    set(&mut cfg.gap_check_every, s.gap_check_every);
    spec.validate()?;
    Ok(spec)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_uses_defaults() {
        let spec = parse_spec("problem = \"quad-scaled\"").unwrap();
        assert_eq!(spec.family, ProblemFamily::QuadScaled);
        assert_eq!(spec.q_mode, QMode::SinOverI);
        assert_eq!(spec.dims, vec![5, 10, 20, 50, 100]);
        assert_eq!(spec.methods.len(), 3);
        assert_eq!(spec.solver.schedule.delta0, 1.0);
    }

    #[test]
    fn overrides_apply() {
        let spec = parse_spec(
            r#"
            problem = "convex-simplex"
            start = "vertex"
            dims = [3]
            methods = ["PVM"]
            [solver]
            step = "divergent"
            delta0 = 2.0
            eps0 = 0.25
            max_iterations = 50
            "#,
        )
        .unwrap();
        assert_eq!(spec.start, StartKind::FirstVertex);
        assert_eq!(spec.methods, vec![Method::Pvm]);
        assert_eq!(spec.step, StepKind::Divergent);
        assert_eq!(spec.solver.schedule.eps0, 0.25);
        assert_eq!(spec.solver.stop.max_inner_iterations, 50);
    }

    #[test]
    fn bad_files_are_config_errors() {
        for text in [
            "problem = \"quad-cube\"",
            "problem = \"quad-simplex\"\nbogus = 1",
            "problem = \"quad-simplex\"\n[solver]\neps0 = 1.5",
            "problem = \"quad-simplex\"\ndims = []",
            "problem = ",
        ] {
            assert!(matches!(parse_spec(text), Err(Error::Config(_))), "{text}");
        }
    }
}
