mod common;

use pvm::diagnostics::{check_stationarity, gap, weight_probe};
use pvm::{AtomicDomain, Method, Objective, QuadraticObjective, SolverConfig, StopCriteria, WeightedPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scaled_domain() -> impl Strategy<Value = AtomicDomain> {
    (prop::collection::vec(0.2f64..5.0, 1..8), 0.1f64..30.0)
        .prop_map(|(a, tau)| AtomicDomain::scaled_simplex(a, tau).unwrap())
}

fn explicit_domain() -> impl Strategy<Value = AtomicDomain> {
    (1usize..5, 1usize..8).prop_flat_map(|(dim, n)| {
        prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), n)
            .prop_map(|atoms| AtomicDomain::explicit(atoms).unwrap())
    })
}

fn any_domain() -> impl Strategy<Value = AtomicDomain> {
    prop_oneof![scaled_domain(), explicit_domain()]
}

/// A domain, raw (unnormalized) weights and a gradient of matching sizes.
fn instance(domain: impl Strategy<Value = AtomicDomain>) -> impl Strategy<Value = (AtomicDomain, Vec<f64>, Vec<f64>)> {
    domain.prop_flat_map(|d| {
        let n = d.n();
        let m = d.dim();
        (
            Just(d),
            prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..1.0], n),
            prop::collection::vec(-5.0f64..5.0, m),
        )
    })
}

fn point(d: &AtomicDomain, raw: &[f64]) -> Option<WeightedPoint> {
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return None;
    }
    WeightedPoint::from_weights(d, raw.iter().enumerate().map(|(i, u)| (i, u / total))).ok()
}

proptest! {
    #[test]
    fn lmo_and_away_match_enumeration((d, raw, g) in instance(any_domain()), eps in 0.0f64..0.5) {
        let values: Vec<f64> = (0..d.n()).map(|i| d.atom_value(i, &g)).collect();
        let lmo = d.lmo(&g).unwrap();
        let lowest = values.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(lmo.value, lowest);
        prop_assert_eq!(values.iter().position(|&v| v == lowest), Some(lmo.index));

        let Some(wp) = point(&d, &raw) else { return Ok(()) };
        let eligible: Vec<usize> = wp.support().filter(|&i| eps == 0.0 || wp.weight(i) >= eps).collect();
        match d.away_index(&g, &wp, eps) {
            None => prop_assert!(eligible.is_empty()),
            Some(away) => {
                let top = eligible.iter().map(|&i| values[i]).fold(f64::NEG_INFINITY, f64::max);
                prop_assert_eq!(away.value, top);
                prop_assert!(eligible.contains(&away.index));
            }
        }
    }

    #[test]
    fn gap_is_nonnegative_and_zero_iff_stationary((d, raw, g) in instance(any_domain())) {
        let Some(wp) = point(&d, &raw) else { return Ok(()) };
        let delta = gap(&d, &g, wp.point());
        let scale = 1.0 + g.iter().map(|v| v.abs()).sum::<f64>() * d.diameter().value().max(1.0);
        prop_assert!(delta >= -1e-12 * scale);
        let r = check_stationarity(&d, &wp, &g, 1e-9 * scale);
        // the gap is a weighted average of the per-atom excesses
        prop_assert!(delta <= r.worst_violation + 1e-9 * scale);
    }

    #[test]
    fn weights_round_trip((d, raw, _g) in instance(scaled_domain())) {
        let Some(wp) = point(&d, &raw) else { return Ok(()) };
        let back = d.weights_of(wp.point()).unwrap();
        for i in 0..d.n() {
            prop_assert!((back.weight(i) - wp.weight(i)).abs() <= 1e-12);
        }
        let rebuilt = d.reconstruct(back.weights());
        for (a, b) in rebuilt.iter().zip(wp.point()) {
            prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn weight_probe_tracks_weight((d, raw, _g) in instance(scaled_domain()), i in 0usize..8, eps in 0.001f64..1.0) {
        let Some(wp) = point(&d, &raw) else { return Ok(()) };
        let i = i % d.n();
        let probe = weight_probe(&d, wp.point(), i, eps).unwrap();
        let u = wp.weight(i);
        if u >= eps + 1e-9 {
            prop_assert!(probe);
        }
        if u < eps - 1e-9 {
            prop_assert!(!probe);
        }
    }

    #[test]
    fn solver_steps_descend(seed in any::<u64>(), m in 2usize..6, method_ix in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f: QuadraticObjective = common::random_convex_quadratic(&mut rng, m, 0.1);
        let d = AtomicDomain::simplex(m, 1.0).unwrap();
        let config = SolverConfig {
            stop: StopCriteria { target_gap: 1e-6, max_inner_iterations: 2000, max_stages: 40 },
            ..SolverConfig::default()
        };
        let method = Method::ALL[method_ix];
        let r = method.solve(&d, &f, &config, &WeightedPoint::barycenter(&d)).unwrap();
        prop_assert_eq!(r.f_trajectory.len(), r.iterations + 1);
        prop_assert!((r.f_trajectory[0] - f.value(WeightedPoint::barycenter(&d).point())).abs() < 1e-12);
        for s in &r.steps {
            prop_assert!(s.slope < 0.0 && s.slope <= -s.threshold);
            prop_assert!(s.f_after <= s.f_before + config.armijo.beta * s.step * s.slope + 1e-12);
        }
        let (sum_err, min_u, recon) = r.final_point.integrity(&d);
        prop_assert!(sum_err <= 1e-12 && min_u > 0.0 && recon <= 1e-9);
    }
}
