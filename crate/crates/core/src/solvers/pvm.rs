use super::select::{select_pair, AtomValues};
use super::{
    check_start, GapSample, Method, RestartRecord, RunReport, SolverConfig, StepRecord, Termination,
};
use crate::diagnostics::gap;
use crate::domain::{AtomicDomain, WeightedPoint};
use crate::error::Result;
use crate::objective::{GradientOracle, Objective};
use crate::stepsize::{armijo_search, divergent_step, fixed_step, StepRule};

/// Pairwise variation method with tolerances, carrying explicit weights.
///
/// Stage `l = 1, 2, ...` runs with `delta_l`, `eps_l`. Each inner iteration
/// looks for `i` with `u_i >= eps_l` and any `j` with
/// `<f'(x), z^i - z^j> >= delta_l`, then moves up to `u_i` of weight from `i` to
/// `j`. When no such pair exists the stage ends (restart) and both tolerances
/// shrink.
///
/// Only the partial derivatives spent on pair selection are charged to
/// `partial_calls`; gap checks and restart certificates use uncounted
/// evaluations.
pub fn pvm_solve(
    domain: &AtomicDomain,
    objective: &dyn Objective,
    config: &SolverConfig,
    start: &WeightedPoint,
) -> Result<RunReport> {
    config.validate()?;
    check_start(domain, objective, start)?;
    let n = domain.n();
    let m = domain.dim();
    let schedule = config.schedule;
    let stop = config.stop;

    let mut oracle = GradientOracle::new(objective);
    let mut wp = start.clone();
    let mut f = oracle.value(wp.point());
    let mut values = AtomValues::new(n, m);
    let mut grad = vec![0.0; m];
    let mut trial = Vec::with_capacity(m);

    let mut f_trajectory = vec![f];
    let mut gap_trajectory = Vec::new();
    let mut restarts = Vec::new();
    let mut steps = Vec::new();

    let mut total = 0usize;
    let mut stage = 1usize;
    let mut k = 0usize;
    let mut scan = 0usize;
    let mut since_check = 0usize;

    let current_gap = |x: &[f64], grad: &mut [f64]| {
        objective.gradient(x, grad);
        gap(domain, grad, x)
    };

    let initial = current_gap(wp.point(), &mut grad);
    gap_trajectory.push(GapSample { iteration: 0, gap: initial });
    let terminated_by = if initial <= stop.target_gap {
        Termination::GapReached
    } else {
        loop {
            if since_check >= config.gap_check_every {
                since_check = 0;
                let g = current_gap(wp.point(), &mut grad);
                gap_trajectory.push(GapSample { iteration: total, gap: g });
                if g <= stop.target_gap {
                    break Termination::GapReached;
                }
            }
            if total >= stop.max_inner_iterations {
                break Termination::IterationCap;
            }

            let delta = schedule.delta(stage);
            let eps = schedule.epsilon(stage);
            let pair = {
                let x = wp.point();
                select_pair(wp.weights(), n, eps, delta, &mut scan, |s| {
                    values.get(s, domain, &mut oracle, x)
                })
            };

            let Some(pair) = pair else {
                // restart: record w^l and certify that no admissible pair was missed
                objective.gradient(wp.point(), &mut grad);
                let g = gap(domain, &grad, wp.point());
                let lowest = domain.lmo(&grad)?.value;
                let certificate = domain
                    .away_index(&grad, &wp, eps)
                    .map(|away| away.value - lowest);
                debug_assert!(certificate.is_none_or(|c| c < delta + 1e-9 * (1.0 + c.abs())));
                restarts.push(RestartRecord {
                    stage,
                    inner_iterations: k,
                    total_iterations: total,
                    delta,
                    epsilon: eps,
                    gap: g,
                    f,
                    certificate,
                    point: wp.clone(),
                });
                gap_trajectory.push(GapSample { iteration: total, gap: g });
                since_check = 0;
                if g <= stop.target_gap {
                    break Termination::GapReached;
                }
                stage += 1;
                k = 0;
                scan = 0;
                if stage > stop.max_stages {
                    break Termination::StageCap;
                }
                continue;
            };

            let slope = -pair.margin;
            debug_assert!(slope <= -delta);
            let (i, j, gamma) = (pair.from, pair.to, pair.gamma);
            let (step, f_next) = match config.step_rule {
                StepRule::Armijo => {
                    let accepted = armijo_search(f, gamma, slope, &config.armijo, |lambda| {
                        wp.trial_transfer(domain, i, j, lambda, &mut trial);
                        oracle.value(&trial)
                    })?;
                    (accepted.step, accepted.value)
                }
                StepRule::FixedLipschitz { lipschitz, diameter } => {
                    let lambda =
                        fixed_step(lipschitz, diameter, config.armijo.beta, eps, delta).min(gamma);
                    wp.trial_transfer(domain, i, j, lambda, &mut trial);
                    (lambda, oracle.value(&trial))
                }
                StepRule::Divergent => {
                    let lambda = divergent_step(k, eps).min(gamma);
                    wp.trial_transfer(domain, i, j, lambda, &mut trial);
                    (lambda, oracle.value(&trial))
                }
            };

            wp.transfer(domain, i, j, step);
            values.invalidate();
            steps.push(StepRecord {
                stage,
                k,
                from: Some(i),
                to: j,
                gamma,
                step,
                slope,
                threshold: delta,
                f_before: f,
                f_after: f_next,
                partial_calls: oracle.counters().partial_calls,
            });
            f = f_next;
            f_trajectory.push(f);
            total += 1;
            k += 1;
            since_check += 1;
        }
    };

    let final_gap = current_gap(wp.point(), &mut grad);
    let counters = oracle.counters();
    Ok(RunReport {
        method: Method::Pvm,
        iterations: total,
        partial_calls: counters.partial_calls,
        value_calls: counters.value_calls,
        f_trajectory,
        gap_trajectory,
        restarts,
        steps,
        final_point: wp,
        final_gap,
        terminated_by,
    })
}
