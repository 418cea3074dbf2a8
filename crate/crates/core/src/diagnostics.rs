//! Optimality and accuracy instrumentation: the gap function, stationarity
//! conditions over atom weights, the weight probe, the restart gap bound and
//! the complexity envelope.

use std::collections::BTreeMap;

use crate::domain::{dot, AtomicDomain, WeightedPoint};
use crate::error::{Error, Result};
use crate::objective::Objective;
use crate::solvers::{RunReport, ToleranceSchedule};

/// Default tolerance for user-facing stationarity checks.
pub const STATIONARITY_TOL: f64 = 1e-6;

/// `Delta(x) = max_{y in D} <g, x - y> = <g, x> - min_i <g, z^i>`.
pub fn gap(domain: &AtomicDomain, g: &[f64], x: &[f64]) -> f64 {
    let lowest = (0..domain.n())
        .map(|i| domain.atom_value(i, g))
        .fold(f64::INFINITY, f64::min);
    dot(g, x) - lowest
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    pub is_stationary: bool,
    pub tol: f64,
    /// `max_{u_i > 0} <g, z^i> - min_j <g, z^j>`.
    pub worst_violation: f64,
    /// A pair `(i, j)` with `u_i > 0` and `<g, z^i> > <g, z^j> + tol`.
    pub witness: Option<(usize, usize)>,
    /// Verdicts of the level, exclusion and pairwise forms, in that order.
    pub verdicts: [bool; 3],
}

/// Level form: supported atoms sit exactly at `<g, x>`, unsupported ones at or above it.
///
/// `<g, x>` is formed from the weights, so a rounding allowance proportional to
/// its magnitude is added to `tol`.
pub fn level_condition(values: &[f64], weights: &BTreeMap<usize, f64>, tol: f64) -> bool {
    let total: f64 = weights.values().sum();
    let level: f64 = weights.iter().map(|(&i, u)| u * values[i]).sum::<f64>() / total;
    let scale: f64 = weights.iter().map(|(&i, u)| u * values[i].abs()).sum::<f64>() / total;
    let slack = tol + 4.0 * f64::EPSILON * (weights.len() as f64 + 1.0) * scale;
    values.iter().enumerate().all(|(i, &v)| {
        if weights.contains_key(&i) {
            (v - level).abs() <= slack
        } else {
            v >= level - slack
        }
    })
}

/// Exclusion form: `<g, z^i> > <g, z^j>` for some `j` forces `u_i = 0`.
pub fn exclusion_condition(values: &[f64], weights: &BTreeMap<usize, f64>, tol: f64) -> bool {
    (0..values.len()).all(|i| {
        let dominated = values.iter().any(|&vj| values[i] > vj + tol);
        !dominated || !weights.contains_key(&i)
    })
}

/// Pairwise form: `u_i > 0` implies `<g, z^i> <= <g, z^j>` for every `j`.
pub fn pairwise_condition(values: &[f64], weights: &BTreeMap<usize, f64>, tol: f64) -> bool {
    weights
        .keys()
        .all(|&i| values.iter().all(|&vj| values[i] <= vj + tol))
}

/// Stationarity of `wp` for the gradient `g`, judged by the pairwise form and
/// cross-evaluated with the level and exclusion forms.
pub fn check_stationarity(
    domain: &AtomicDomain,
    wp: &WeightedPoint,
    g: &[f64],
    tol: f64,
) -> StationarityReport {
    let values: Vec<f64> = (0..domain.n()).map(|i| domain.atom_value(i, g)).collect();
    let (argmin, lowest) = values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, bv), (i, &v)| if v < bv { (i, v) } else { (bi, bv) });
    let (worst_i, worst) = wp
        .support()
        .map(|i| (i, values[i] - lowest))
        .fold((0, f64::NEG_INFINITY), |(bi, bv), (i, v)| if v > bv { (i, v) } else { (bi, bv) });
    let worst = worst.max(0.0);
    let verdicts = [
        level_condition(&values, wp.weights(), tol),
        exclusion_condition(&values, wp.weights(), tol),
        pairwise_condition(&values, wp.weights(), tol),
    ];
    StationarityReport {
        is_stationary: worst <= tol,
        tol,
        worst_violation: worst,
        witness: (worst > tol).then_some((worst_i, argmin)),
        verdicts,
    }
}

/// True iff `x + eps (z^j - z^i)` stays feasible for every atom `j`. A `false`
/// certifies `u_i(x) < eps` for every weight representation of `x`.
pub fn weight_probe(domain: &AtomicDomain, x: &[f64], i: usize, eps: f64) -> Result<bool> {
    let wp = domain.weights_of(x)?;
    if i >= domain.n() {
        return Err(Error::Domain(format!("atom index {i} out of range")));
    }
    // moving eps of weight off atom i keeps every other coordinate nonnegative,
    // so only coordinate i can leave the set
    Ok(wp.weight(i) >= eps - 1e-12)
}

/// Estimate of `sigma = max_i max_{x in D} |<f'(x), z^i>|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEstimate {
    /// Maximum over the restart points and final point of a run.
    pub empirical: f64,
    /// Closed-form overestimate over the whole domain, when the objective provides one.
    pub analytic: Option<f64>,
}

impl SigmaEstimate {
    /// The value used in bound checks: the larger of the two.
    pub fn value(&self) -> f64 {
        self.analytic.map_or(self.empirical, |a| a.max(self.empirical))
    }

    /// Whether `value` is a certified upper bound on the global quantity.
    pub fn is_certified(&self) -> bool {
        self.analytic.is_some()
    }
}

pub fn sigma_over_run(report: &RunReport, domain: &AtomicDomain, objective: &dyn Objective) -> SigmaEstimate {
    let mut grad = vec![0.0; domain.dim()];
    let mut empirical = 0.0f64;
    let points = report
        .restarts
        .iter()
        .map(|r| r.point.point())
        .chain(std::iter::once(report.final_point.point()));
    for x in points {
        objective.gradient(x, &mut grad);
        for i in 0..domain.n() {
            empirical = empirical.max(domain.atom_value(i, &grad).abs());
        }
    }
    SigmaEstimate {
        empirical,
        analytic: objective.atom_value_bound(domain),
    }
}

/// Constants of the complexity estimate `N(alpha) <= C2 (C1 / alpha - 1) / (1 - nu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexityConstants {
    /// `1 + 2 n sigma`.
    pub c1: f64,
    /// `C1 L B^2 / (beta (1 - beta) delta0)`.
    pub c2: f64,
    pub nu: f64,
}

impl ComplexityConstants {
    /// Worst-case total inner iterations before `f - f* < alpha`; 0 once `alpha >= C1`.
    pub fn bound(&self, alpha: f64) -> f64 {
        (self.c2 * (self.c1 / alpha - 1.0) / (1.0 - self.nu)).max(0.0)
    }
}

pub fn complexity_constants(
    n: usize,
    sigma: f64,
    lipschitz: f64,
    diameter: f64,
    beta: f64,
    delta0: f64,
    nu: f64,
) -> Result<ComplexityConstants> {
    if !(sigma > 0.0 && lipschitz > 0.0 && diameter > 0.0 && delta0 > 0.0) || n == 0 {
        return Err(Error::Config("complexity constants need positive n, sigma, L, B, delta0".into()));
    }
    if !(beta > 0.0 && beta < 1.0) || !(nu > 0.0 && nu < 1.0) {
        return Err(Error::Config("beta and nu must lie in (0, 1)".into()));
    }
    let c1 = 1.0 + 2.0 * n as f64 * sigma;
    let c2 = c1 * lipschitz * diameter * diameter / (beta * (1.0 - beta) * delta0);
    Ok(ComplexityConstants { c1, c2, nu })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartBoundCheck {
    pub stage: usize,
    pub gap: f64,
    /// `delta_l + 2 n eps_l sigma`.
    pub bound: f64,
    pub holds: bool,
}

/// Pairs each restart gap of a run with its stage bound.
pub fn restart_gap_bound(
    report: &RunReport,
    n: usize,
    sigma: f64,
    schedule: &ToleranceSchedule,
) -> Vec<RestartBoundCheck> {
    report
        .restarts
        .iter()
        .map(|r| {
            let bound = schedule.delta(r.stage) + 2.0 * n as f64 * schedule.epsilon(r.stage) * sigma;
            RestartBoundCheck {
                stage: r.stage,
                gap: r.gap,
                bound,
                holds: r.gap <= bound,
            }
        })
        .collect()
}
