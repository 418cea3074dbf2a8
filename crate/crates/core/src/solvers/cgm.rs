use super::{check_start, GapSample, Method, RunReport, SolverConfig, StepRecord, Termination};
use crate::domain::{dot, AtomicDomain, WeightedPoint};
use crate::error::Result;
use crate::objective::{GradientOracle, Objective};
use crate::stepsize::armijo_search;

/// Classical conditional gradient with Armijo backtracking from `gamma = 1`.
///
/// Each iteration spends one full gradient (`m` partials). The stopping test at
/// the final iterate is not charged, so `partial_calls = m * iterations`.
pub fn cgm_solve(
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
        let target = domain.lmo(&grad)?;
        let gap = dot(&grad, wp.point()) - target.value;
        gap_trajectory.push(GapSample { iteration: it, gap });
        if gap <= stop.target_gap || gap <= 0.0 {
            break (Termination::GapReached, gap);
        }
        if it >= stop.max_inner_iterations {
            break (Termination::IterationCap, gap);
        }
        oracle.charge_gradient();

        let slope = -gap;
        let to = target.index;
        let accepted = armijo_search(f, 1.0, slope, &config.armijo, |lambda| {
            wp.trial_blend(domain, to, lambda, &mut trial);
            oracle.value(&trial)
        })?;
        wp.blend(domain, to, accepted.step);
        steps.push(StepRecord {
            stage: 0,
            k: it,
            from: None,
            to,
            gamma: 1.0,
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
        method: Method::Cgm,
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{LinearObjective, QMode, QuadraticObjective};

    #[test]
    fn linear_objective_solved_in_one_step() {
        let d = AtomicDomain::simplex(3, 2.0).unwrap();
        let f = LinearObjective::new(vec![1.0, -1.0, 0.5]);
        let r = cgm_solve(&d, &f, &SolverConfig::default(), &WeightedPoint::barycenter(&d)).unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.final_gap, 0.0);
        assert_eq!(r.final_point.support().collect::<Vec<_>>(), vec![1]);
        assert_eq!(r.partial_calls, 3);
    }

    #[test]
    fn charges_one_gradient_per_iteration() {
        let d = AtomicDomain::simplex(6, 10.0).unwrap();
        let f = QuadraticObjective::benchmark(6, QMode::Zero);
        let r = cgm_solve(&d, &f, &SolverConfig::default(), &WeightedPoint::vertex(&d, 0).unwrap())
            .unwrap();
        assert!(r.iterations > 0);
        assert_eq!(r.partial_calls, 6 * r.iterations as u64);
        assert!(r.f_trajectory.windows(2).all(|w| w[1] <= w[0]));
    }
}
