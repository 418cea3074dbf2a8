use super::{check_start, GapSample, Method, RunReport, SolverConfig, StepRecord, Termination};
use crate::domain::{dot, AtomicDomain, WeightedPoint};
use crate::error::Result;
use crate::objective::{GradientOracle, Objective};
use crate::stepsize::armijo_search;

/// Marginal swap-direction method: full gradient each iteration, `i` the
/// supported atom with the largest `<g, z>`, `j` the overall minimizer, and a
/// transfer of up to `u_i` from `i` to `j`.
pub fn mdm_solve(
    domain: &AtomicDomain,
    objective: &dyn Objective,
    config: &SolverConfig,
    start: &WeightedPoint,
) -> Result<RunReport> {
    config.validate()?;
    check_start(domain, objective, start)?;
    let m = domain.dim();
    let stop = config.stop;

    let mut oracle = GradientOracle::new(objective);
    let mut wp = start.clone();
    let mut f = oracle.value(wp.point());
    let mut grad = vec![0.0; m];
    let mut trial = Vec::with_capacity(m);
    let mut f_trajectory = vec![f];
    let mut gap_trajectory = Vec::new();
    let mut steps = Vec::new();
    let mut it = 0usize;

    let (terminated_by, final_gap) = loop {
        objective.gradient(wp.point(), &mut grad);
        let toward = domain.lmo(&grad)?;
        let gap = dot(&grad, wp.point()) - toward.value;
        gap_trajectory.push(GapSample { iteration: it, gap });
        if gap <= stop.target_gap {
            break (Termination::GapReached, gap);
        }
        if it >= stop.max_inner_iterations {
            break (Termination::IterationCap, gap);
        }
        let away = domain
            .away_index(&grad, &wp, 0.0)
            .expect("a valid weighted point has nonempty support");
        let margin = away.value - toward.value;
        if margin <= 0.0 {
            // every supported atom already attains the minimum
            break (Termination::GapReached, gap);
        }
        oracle.charge_gradient();

        let (i, j) = (away.index, toward.index);
        let gamma = wp.weight(i);
        let slope = -margin;
        let accepted = armijo_search(f, gamma, slope, &config.armijo, |lambda| {
            wp.trial_transfer(domain, i, j, lambda, &mut trial);
            oracle.value(&trial)
        })?;
        wp.transfer(domain, i, j, accepted.step);
        steps.push(StepRecord {
            stage: 0,
            k: it,
            from: Some(i),
            to: j,
            gamma,
            step: accepted.step,
            slope,
            threshold: 0.0,
            f_before: f,
            f_after: accepted.value,
            partial_calls: oracle.counters().partial_calls,
        });
        f = accepted.value;
        f_trajectory.push(f);
        it += 1;
    };

    let counters = oracle.counters();
    Ok(RunReport {
        method: Method::Mdm,
        iterations: it,
        partial_calls: counters.partial_calls,
        value_calls: counters.value_calls,
        f_trajectory,
        gap_trajectory,
        restarts: Vec::new(),
        steps,
        final_point: wp,
        final_gap,
        terminated_by,
    })
}
