use std::collections::BTreeMap;

use crate::domain::{dot, AtomSet, AtomicDomain};
use crate::objective::GradientOracle;

/// A pair `(i, j)` passing the threshold test `<g, z^i - z^j> >= delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairChoice {
    /// `i`, the atom giving up weight.
    pub from: usize,
    /// `j`, the atom receiving weight.
    pub to: usize,
    /// `gamma = u_i`.
    pub gamma: f64,
    /// `<g, z^i> - <g, z^j>`.
    pub margin: f64,
}

/// Evaluation-frugal pair search.
///
/// `i` maximizes `<g, z^s>` over supported atoms with `u_s >= eps`. Candidates
/// `j` are then scanned cyclically from `*scan` and the first one with margin at
/// least `delta` is returned. `None` means the scan covered every atom without a
/// hit, so no admissible pair exists at this tolerance. `atom_value(s)` is
/// called at most once per atom.
pub fn select_pair(
    weights: &BTreeMap<usize, f64>,
    n: usize,
    eps: f64,
    delta: f64,
    scan: &mut usize,
    mut atom_value: impl FnMut(usize) -> f64,
) -> Option<PairChoice> {
    let mut seen: BTreeMap<usize, f64> = BTreeMap::new();
    let mut best: Option<(usize, f64, f64)> = None;
    for (&s, &u) in weights {
        if u < eps {
            continue;
        }
        let v = atom_value(s);
        seen.insert(s, v);
        if best.is_none_or(|(_, bv, _)| v > bv) {
            best = Some((s, v, u));
        }
    }
    let (from, from_value, gamma) = best?;
    let start = *scan % n;
    for t in 0..n {
        let j = (start + t) % n;
        let vj = match seen.get(&j) {
            Some(v) => *v,
            None => atom_value(j),
        };
        let margin = from_value - vj;
        if margin >= delta {
            *scan = (j + 1) % n;
            return Some(PairChoice {
                from,
                to: j,
                gamma,
                margin,
            });
        }
    }
    None
}

/// Per-iterate memo of `<f'(x), z^s>`. On scaled simplices each entry costs one
/// partial derivative; explicit atoms need the full gradient once per iterate.
pub(crate) struct AtomValues {
    values: Vec<f64>,
    stamp: Vec<u64>,
    epoch: u64,
    grad: Vec<f64>,
    grad_epoch: u64,
}

impl AtomValues {
    pub(crate) fn new(n: usize, dim: usize) -> Self {
        Self {
            values: vec![0.0; n],
            stamp: vec![0; n],
            epoch: 1,
            grad: vec![0.0; dim],
            grad_epoch: 0,
        }
    }

    /// Forget all values; call whenever the iterate moves.
    pub(crate) fn invalidate(&mut self) {
        self.epoch += 1;
    }

    pub(crate) fn get(
        &mut self,
        s: usize,
        domain: &AtomicDomain,
        oracle: &mut GradientOracle<'_>,
        x: &[f64],
    ) -> f64 {
        if self.stamp[s] == self.epoch {
            return self.values[s];
        }
        let v = match domain.atom_set() {
            AtomSet::ScaledSimplex { a, tau } => tau * oracle.partial(x, s) / a[s],
            AtomSet::Explicit { atoms } => {
                if self.grad_epoch != self.epoch {
                    oracle.gradient(x, &mut self.grad);
                    self.grad_epoch = self.epoch;
                }
                dot(&atoms[s], &self.grad)
            }
        };
        self.values[s] = v;
        self.stamp[s] = self.epoch;
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::{LinearObjective, Objective, QMode, QuadraticObjective};

    fn uniform3() -> BTreeMap<usize, f64> {
        BTreeMap::from([(0, 1.0 / 3.0), (1, 1.0 / 3.0), (2, 1.0 / 3.0)])
    }

    #[test]
    fn finds_first_admissible_pair() {
        let g = [3.0, 1.0, 2.0];
        let mut scan = 0;
        let pair = select_pair(&uniform3(), 3, 0.1, 0.5, &mut scan, |s| g[s]).unwrap();
        assert_eq!((pair.from, pair.to), (0, 1));
        assert!((pair.gamma - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(pair.margin, 2.0);
        assert_eq!(scan, 2);
    }

    #[test]
    fn empty_when_margin_too_small() {
        let g = [3.0, 1.0, 2.0];
        let mut scan = 0;
        assert!(select_pair(&uniform3(), 3, 0.1, 2.5, &mut scan, |s| g[s]).is_none());

        let single = BTreeMap::from([(0, 1.0)]);
        for delta in [1e-12, 0.3, 7.0] {
            assert!(select_pair(&single, 3, 0.1, delta, &mut scan, |_| 1.0).is_none());
        }
    }

    #[test]
    fn empty_when_no_weight_reaches_eps() {
        let mut calls = 0;
        let mut scan = 0;
        let r = select_pair(&uniform3(), 3, 0.5, 0.1, &mut scan, |_| {
            calls += 1;
            0.0
        });
        assert!(r.is_none());
        assert_eq!(calls, 0);
    }

    #[test]
    fn scan_resumes_from_pointer() {
        // atoms 1 and 2 both qualify; starting the scan at 2 picks 2
        let g = [3.0, 0.0, 1.0, 5.0];
        let w = BTreeMap::from([(0, 1.0)]);
        let mut scan = 2;
        let pair = select_pair(&w, 4, 0.5, 1.0, &mut scan, |s| g[s]).unwrap();
        assert_eq!(pair.to, 2);
        assert_eq!(scan, 3);
        // wraps around past the end
        let pair = select_pair(&w, 4, 0.5, 1.0, &mut scan, |s| g[s]).unwrap();
        assert_eq!(pair.to, 1);
    }

    #[test]
    fn each_atom_evaluated_at_most_once() {
        let g = [1.0, 1.0, 1.0, 1.0];
        let w = BTreeMap::from([(0, 0.5), (3, 0.5)]);
        let mut counts = [0; 4];
        let mut scan = 1;
        assert!(select_pair(&w, 4, 0.1, 0.1, &mut scan, |s| {
            counts[s] += 1;
            g[s]
        })
        .is_none());
        assert_eq!(counts, [1, 1, 1, 1]);
    }

    #[test]
    fn atom_values_cost_partials_on_simplex() {
        let d = AtomicDomain::simplex(4, 2.0).unwrap();
        let q = QuadraticObjective::benchmark(4, QMode::Zero);
        let mut oracle = GradientOracle::new(&q);
        let x = [0.5; 4];
        let mut cache = AtomValues::new(4, 4);
        let v = cache.get(2, &d, &mut oracle, &x);
        assert_eq!(v, 2.0 * q.partial(&x, 2));
        cache.get(2, &d, &mut oracle, &x);
        assert_eq!(oracle.counters().partial_calls, 1);
        cache.invalidate();
        cache.get(2, &d, &mut oracle, &x);
        assert_eq!(oracle.counters().partial_calls, 2);
    }

    #[test]
    fn atom_values_cost_one_gradient_on_explicit_atoms() {
        let d = AtomicDomain::explicit(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        let f = LinearObjective::new(vec![2.0, -1.0]);
        let mut oracle = GradientOracle::new(&f);
        let mut cache = AtomValues::new(3, 2);
        let x = [0.5, 0.5];
        let vals: Vec<f64> = (0..3).map(|s| cache.get(s, &d, &mut oracle, &x)).collect();
        assert_eq!(vals, vec![2.0, -1.0, 1.0]);
        assert_eq!(oracle.counters().partial_calls, 2);
    }

}
