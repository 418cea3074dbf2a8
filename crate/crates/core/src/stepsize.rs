//! Step-size rules: Armijo backtracking, the Lipschitz fixed step, and the
//! divergent-series rule.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::objective::GradientOracle;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmijoParams {
    /// Sufficient-decrease fraction, in (0, 1).
    pub beta: f64,
    /// Backtracking factor, in (0, 1).
    pub theta: f64,
    pub max_backtracks: usize,
}

impl Default for ArmijoParams {
    fn default() -> Self {
        Self {
            beta: 0.5,
            theta: 0.5,
            max_backtracks: 60,
        }
    }
}

impl ArmijoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::Config(format!("beta = {} must lie in (0, 1)", self.beta)));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::Config(format!("theta = {} must lie in (0, 1)", self.theta)));
        }
        if self.max_backtracks == 0 {
            return Err(Error::Config("max_backtracks must be at least 1".into()));
        }
        Ok(())
    }
}

/// Which step-length regime the pairwise solvers use. Armijo takes its
/// parameters from the solver configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    Armijo,
    /// `lambda_k = min{(1 - beta) / (L B^2), eps_l} * delta_l`.
    FixedLipschitz { lipschitz: f64, diameter: f64 },
    /// `lambda_k = eps_l / (k + 1)`.
    Divergent,
}

impl StepRule {
    pub fn validate(&self) -> Result<()> {
        if let StepRule::FixedLipschitz { lipschitz, diameter } = *self {
            if !(lipschitz > 0.0) || !(diameter > 0.0) {
                return Err(Error::Config(format!(
                    "fixed step needs L > 0 and B > 0 (got L = {lipschitz}, B = {diameter})"
                )));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> StepKind {
        match self {
            StepRule::Armijo => StepKind::Armijo,
            StepRule::FixedLipschitz { .. } => StepKind::Fixed,
            StepRule::Divergent => StepKind::Divergent,
        }
    }
}

/// Step rule name as given on the command line; `Fixed` is resolved to a
/// [`StepRule`] once `L` and `B` are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Armijo,
    Fixed,
    Divergent,
}

impl FromStr for StepKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "armijo" => Ok(StepKind::Armijo),
            "fixed" => Ok(StepKind::Fixed),
            "divergent" => Ok(StepKind::Divergent),
            other => Err(Error::Config(format!("unknown step rule {other:?}"))),
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepKind::Armijo => "armijo",
            StepKind::Fixed => "fixed",
            StepKind::Divergent => "divergent",
        })
    }
}

/// Outcome of a successful backtracking search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmijoStep {
    /// `m_k`, the number of rejected trials.
    pub backtracks: usize,
    /// `lambda_k = theta^m_k * gamma`.
    pub step: f64,
    /// Objective value at the accepted point.
    pub value: f64,
}

/// Backtracking on a line given by `eval(lambda) = f(x + lambda d)`.
///
/// Accepts the first `lambda = theta^m gamma`, `m = 0, 1, ...`, with
/// `f(x + lambda d) <= f(x) + beta lambda slope`.
pub fn armijo_search(
    f0: f64,
    gamma: f64,
    slope: f64,
    params: &ArmijoParams,
    mut eval: impl FnMut(f64) -> f64,
) -> Result<ArmijoStep> {
    let mut step = gamma;
    for m in 0..=params.max_backtracks {
        step = params.theta.powi(m as i32) * gamma;
        let value = eval(step);
        if value <= f0 + params.beta * step * slope {
            return Ok(ArmijoStep {
                backtracks: m,
                step,
                value,
            });
        }
    }
    Err(Error::LineSearch {
        backtracks: params.max_backtracks,
        last_step: step,
        slope,
    })
}

/// Armijo search along a dense direction `d` from `x`; `slope = <f'(x), d>` must be negative.
pub fn armijo(
    oracle: &mut GradientOracle<'_>,
    x: &[f64],
    d: &[f64],
    gamma: f64,
    slope: f64,
    params: &ArmijoParams,
) -> Result<ArmijoStep> {
    let f0 = oracle.value(x);
    let mut trial = vec![0.0; x.len()];
    armijo_search(f0, gamma, slope, params, |step| {
        for ((t, xi), di) in trial.iter_mut().zip(x).zip(d) {
            *t = xi + step * di;
        }
        oracle.value(&trial)
    })
}

/// `lambda_bar * delta` with `lambda_bar = min{(1 - beta) / (L B^2), eps}`.
pub fn fixed_step(lipschitz: f64, diameter: f64, beta: f64, eps: f64, delta: f64) -> f64 {
    let lambda_bar = ((1.0 - beta) / (lipschitz * diameter * diameter)).min(eps);
    lambda_bar * delta
}

/// `eps / (k + 1)`.
pub fn divergent_step(k: usize, eps: f64) -> f64 {
    eps / (k as f64 + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{QMode, QuadraticObjective};

    fn half() -> ArmijoParams {
        ArmijoParams::default()
    }

    #[test]
    fn linear_line_accepts_full_step() {
        let step = armijo_search(3.0, 0.7, -2.0, &half(), |l| 3.0 - 2.0 * l).unwrap();
        assert_eq!((step.backtracks, step.step), (0, 0.7));
    }

    #[test]
    fn quadratic_line_backtracks_once() {
        // f(x + l d) = f(x) - l + l^2
        let step = armijo_search(0.0, 1.0, -1.0, &half(), |l| -l + l * l).unwrap();
        assert_eq!((step.backtracks, step.step), (1, 0.5));
        assert_eq!(step.value, -0.25);
    }

    #[test]
    fn armijo_on_oracle() {
        let q = QuadraticObjective::benchmark(1, QMode::Zero);
        let mut oracle = GradientOracle::new(&q);
        let step = armijo(&mut oracle, &[2.0], &[-1.0], 1.0, -2.0, &half()).unwrap();
        assert_eq!((step.backtracks, step.step, step.value), (0, 1.0, 0.5));
        assert_eq!(oracle.counters().value_calls, 2);
    }

    #[test]
    fn armijo_reports_exhaustion() {
        let params = ArmijoParams {
            max_backtracks: 5,
            ..half()
        };
        // ascent direction: never accepted
        let err = armijo_search(0.0, 1.0, 1.0, &params, |l| l).unwrap_err();
        assert!(matches!(err, Error::LineSearch { backtracks: 5, .. }));
        assert!(err.is_contract_violation());
    }

    #[test]
    fn params_validation() {
        assert!(half().validate().is_ok());
        assert!(ArmijoParams { beta: 1.0, ..half() }.validate().is_err());
        assert!(ArmijoParams { theta: 0.0, ..half() }.validate().is_err());
        assert!(ArmijoParams { max_backtracks: 0, ..half() }.validate().is_err());
        assert!(StepRule::FixedLipschitz { lipschitz: 0.0, diameter: 1.0 }.validate().is_err());
    }

    #[test]
    fn fixed_step_examples() {
        let s = fixed_step(2.0, 2f64.sqrt(), 0.5, 0.25, 0.5);
        assert!((s - 0.0625).abs() < 1e-15);
        assert!((fixed_step(1.0, 1.0, 0.5, 0.1, 1.0) - 0.1).abs() < 1e-15);
        assert!(fixed_step(1.0, 1.0, 0.5, 0.1, 1e-300) < 1e-300);
    }

    #[test]
    fn divergent_step_examples() {
        assert_eq!(divergent_step(0, 0.5), 0.5);
        assert_eq!(divergent_step(1, 0.5), 0.25);
        let (s1, s2) = (0..100).map(|k| divergent_step(k, 1.0)).fold((0.0, 0.0), |(a, b), l| (a + l, b + l * l));
        assert!((s1 - 5.187377517639621).abs() < 1e-12);
        assert!((s2 - 1.6349839001848923).abs() < 1e-12);
    }

    #[test]
    fn step_kind_parsing() {
        assert_eq!("fixed".parse::<StepKind>().unwrap(), StepKind::Fixed);
        assert!("exact".parse::<StepKind>().is_err());
    }
}
