//! Smooth objectives, the counting gradient oracle, and the benchmark problem
//! generators.

use std::fmt;
use std::str::FromStr;

use crate::domain::{dot, AtomSet, AtomicDomain};
use crate::error::{Error, Result};

/// A smooth function on `R^m` with analytic value, gradient and partial derivatives.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], out: &mut [f64]);
    fn partial(&self, x: &[f64], i: usize) -> f64;

    /// Lipschitz constant of the gradient on `domain`, when one is known.
    fn lipschitz(&self, _domain: &AtomicDomain) -> Option<LipschitzEstimate> {
        None
    }

    /// Certified upper bound on `|<f'(x), z^i>|` over all atoms `i` and all `x` in `domain`.
    fn atom_value_bound(&self, _domain: &AtomicDomain) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LipschitzKind {
    /// Largest eigenvalue of a constant Hessian.
    Exact,
    /// A closed-form bound that may overestimate.
    Conservative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzEstimate {
    pub value: f64,
    pub kind: LipschitzKind,
}

/// Evaluation counts of one run. `partial_calls` counts single partial
/// derivatives; a full gradient costs `m` of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub value_calls: u64,
    pub partial_calls: u64,
}

/// Counting front end to an [`Objective`]. Each solver run owns one.
pub struct GradientOracle<'a> {
    objective: &'a dyn Objective,
    counters: Counters,
}

impl<'a> GradientOracle<'a> {
    pub fn new(objective: &'a dyn Objective) -> Self {
        Self {
            objective,
            counters: Counters::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// The wrapped objective, for evaluations that must not be counted.
    pub fn objective(&self) -> &'a dyn Objective {
        self.objective
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn reset(&mut self) {
        self.counters = Counters::default();
    }

    pub fn value(&mut self, x: &[f64]) -> f64 {
        self.counters.value_calls += 1;
        self.objective.value(x)
    }

    pub fn gradient(&mut self, x: &[f64], out: &mut [f64]) {
        self.counters.partial_calls += self.objective.dim() as u64;
        self.objective.gradient(x, out)
    }

    pub fn partial(&mut self, x: &[f64], i: usize) -> f64 {
        self.counters.partial_calls += 1;
        self.objective.partial(x, i)
    }

    /// Charges a full gradient that was computed through [`GradientOracle::objective`].
    /// Solvers evaluate the stopping test uncounted and charge the gradient only
    /// once it is used to take a step.
    pub fn charge_gradient(&mut self) {
        self.counters.partial_calls += self.objective.dim() as u64;
    }
}

/// How the linear term of the benchmark quadratic is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    Zero,
    /// `q_i = sin(i) / i` with 1-based `i`.
    SinOverI,
}

impl FromStr for QMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" | "0" => Ok(QMode::Zero),
            "sin_over_i" | "sin-over-i" | "sin" => Ok(QMode::SinOverI),
            other => Err(Error::Config(format!("unknown q mode {other:?}"))),
        }
    }
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QMode::Zero => "zero",
            QMode::SinOverI => "sin_over_i",
        })
    }
}

/// `f(x) = <c, x>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearObjective {
    pub c: Vec<f64>,
}

impl LinearObjective {
    pub fn new(c: Vec<f64>) -> Self {
        Self { c }
    }
}

impl Objective for LinearObjective {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn value(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }

    fn gradient(&self, _x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.c);
    }

    fn partial(&self, _x: &[f64], i: usize) -> f64 {
        self.c[i]
    }

    fn lipschitz(&self, _domain: &AtomicDomain) -> Option<LipschitzEstimate> {
        Some(LipschitzEstimate {
            value: 0.0,
            kind: LipschitzKind::Exact,
        })
    }

    fn atom_value_bound(&self, domain: &AtomicDomain) -> Option<f64> {
        Some(
            (0..domain.n())
                .map(|i| domain.atom_value(i, &self.c).abs())
                .fold(0.0, f64::max),
        )
    }
}

/// `phi(x) = 0.5 <Px, x> - <q, x>` with symmetric `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticObjective {
    m: usize,
    /// Row-major `m x m`.
    p: Vec<f64>,
    q: Vec<f64>,
}

impl QuadraticObjective {
    pub fn new(p: Vec<Vec<f64>>, q: Vec<f64>) -> Result<Self> {
        let m = q.len();
        if m == 0 || p.len() != m || p.iter().any(|row| row.len() != m) {
            return Err(Error::Config(format!("P must be {m} x {m} to match q")));
        }
        for i in 0..m {
            for j in 0..i {
                let (a, b) = (p[i][j], p[j][i]);
                if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                    return Err(Error::Config(format!("P is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(Self {
            m,
            p: p.into_iter().flatten().collect(),
            q,
        })
    }

    /// The benchmark matrix: `p_ij = sin(i) cos(j)` above the diagonal, mirrored
    /// below, and `p_jj = 1 + sum_{i != j} |p_ij|` (1-based indices, radians).
    pub fn benchmark(m: usize, q_mode: QMode) -> Self {
        let mut p = vec![0.0; m * m];
        for i in 0..m {
            for j in i + 1..m {
                let v = ((i + 1) as f64).sin() * ((j + 1) as f64).cos();
                p[i * m + j] = v;
                p[j * m + i] = v;
            }
        }
        for j in 0..m {
            let off: f64 = (0..m).filter(|&i| i != j).map(|i| p[i * m + j].abs()).sum();
            p[j * m + j] = 1.0 + off;
        }
        let q = match q_mode {
            QMode::Zero => vec![0.0; m],
            QMode::SinOverI => (1..=m).map(|i| (i as f64).sin() / i as f64).collect(),
        };
        Self { m, p, q }
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.m + j]
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.p[i * self.m..(i + 1) * self.m]
    }

    /// Largest eigenvalue magnitude of `P` by power iteration.
    pub fn spectral_norm(&self) -> f64 {
        let m = self.m;
        // deterministic start with no special alignment to any eigenvector
        let mut v: Vec<f64> = (0..m).map(|i| 1.0 + 0.5 * ((i as f64) * 1.7 + 0.3).sin()).collect();
        normalize(&mut v);
        let mut w = vec![0.0; m];
        let mut lambda = 0.0;
        for _ in 0..100_000 {
            for (i, wi) in w.iter_mut().enumerate() {
                *wi = dot(self.row(i), &v);
            }
            let next = dot(&w, &v).abs();
            let norm = normalize(&mut w);
            if norm == 0.0 {
                return 0.0;
            }
            std::mem::swap(&mut v, &mut w);
            let done = (next - lambda).abs() <= 1e-13 * next;
            lambda = next;
            if done {
                break;
            }
        }
        lambda
    }

    /// Range of `(Px - q)_i` over the domain; exact because the map is linear
    /// and the extremes sit at atoms.
    fn gradient_ranges(&self, domain: &AtomicDomain) -> Vec<(f64, f64)> {
        let n = domain.n();
        (0..self.m)
            .map(|i| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for k in 0..n {
                    let v = match domain.atom_set() {
                        AtomSet::ScaledSimplex { a, tau } => self.entry(i, k) * tau / a[k],
                        AtomSet::Explicit { atoms } => dot(self.row(i), &atoms[k]),
                    } - self.q[i];
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
                (lo, hi)
            })
            .collect()
    }
}

impl Objective for QuadraticObjective {
    fn dim(&self) -> usize {
        self.m
    }

    fn value(&self, x: &[f64]) -> f64 {
        let mut quad = 0.0;
        for i in 0..self.m {
            quad += x[i] * dot(self.row(i), x);
        }
        0.5 * quad - dot(&self.q, x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(self.row(i), x) - self.q[i];
        }
    }

    fn partial(&self, x: &[f64], i: usize) -> f64 {
        dot(self.row(i), x) - self.q[i]
    }

    fn lipschitz(&self, _domain: &AtomicDomain) -> Option<LipschitzEstimate> {
        // round up by the iteration tolerance so the estimate stays an upper bound
        Some(LipschitzEstimate {
            value: self.spectral_norm() * (1.0 + 1e-6),
            kind: LipschitzKind::Exact,
        })
    }

    fn atom_value_bound(&self, domain: &AtomicDomain) -> Option<f64> {
        let ranges = self.gradient_ranges(domain);
        Some(atom_bound_from_ranges(domain, &ranges))
    }
}

/// `f(x) = phi(x) + 1 / (<c, x> + mu)` with `c > 0`, `mu > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBarrierObjective {
    pub base: QuadraticObjective,
    pub c: Vec<f64>,
    pub mu: f64,
}

impl ConvexBarrierObjective {
    pub fn new(base: QuadraticObjective, c: Vec<f64>, mu: f64) -> Result<Self> {
        if c.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                got: c.len(),
            });
        }
        if c.iter().any(|v| !(*v > 0.0)) || !(mu > 0.0) {
            return Err(Error::Config("barrier needs c > 0 and mu > 0".into()));
        }
        Ok(Self { base, c, mu })
    }

    /// Benchmark instance: `c_i = 2 + sin(i)`, `mu = 5`.
    pub fn benchmark(m: usize, q_mode: QMode) -> Self {
        Self {
            base: QuadraticObjective::benchmark(m, q_mode),
            c: (1..=m).map(|i| 2.0 + (i as f64).sin()).collect(),
            mu: 5.0,
        }
    }

    fn shift(&self, x: &[f64]) -> f64 {
        dot(&self.c, x) + self.mu
    }
}

impl Objective for ConvexBarrierObjective {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.base.value(x) + 1.0 / self.shift(x)
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        self.base.gradient(x, out);
        let s = self.shift(x);
        let scale = 1.0 / (s * s);
        for (o, c) in out.iter_mut().zip(&self.c) {
            *o -= c * scale;
        }
    }

    fn partial(&self, x: &[f64], i: usize) -> f64 {
        let s = self.shift(x);
        self.base.partial(x, i) - self.c[i] / (s * s)
    }

    /// `lambda_max(P) + 2 |c|^2 / mu^3`: the barrier Hessian `2 c c^T / s^3` peaks
    /// where `s = <c, x> + mu` is smallest, and `s >= mu` on the orthant.
    fn lipschitz(&self, domain: &AtomicDomain) -> Option<LipschitzEstimate> {
        let base = self.base.lipschitz(domain)?.value;
        let c2 = dot(&self.c, &self.c);
        Some(LipschitzEstimate {
            value: base + 2.0 * c2 / self.mu.powi(3),
            kind: LipschitzKind::Conservative,
        })
    }

    fn atom_value_bound(&self, domain: &AtomicDomain) -> Option<f64> {
        // <c, x> ranges between its extreme atom values
        let (mut smin, mut smax) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in 0..domain.n() {
            let v = domain.atom_value(k, &self.c);
            smin = smin.min(v);
            smax = smax.max(v);
        }
        if smin + self.mu <= 0.0 {
            return None;
        }
        let (lo_s, hi_s) = (smin + self.mu, smax + self.mu);
        let ranges: Vec<(f64, f64)> = self
            .base
            .gradient_ranges(domain)
            .into_iter()
            .zip(&self.c)
            .map(|((lo, hi), c)| (lo - c / (lo_s * lo_s), hi - c / (hi_s * hi_s)))
            .collect();
        Some(atom_bound_from_ranges(domain, &ranges))
    }
}

/// `max_i |<g, z^i>|` given componentwise ranges `g_k in [lo_k, hi_k]`.
fn atom_bound_from_ranges(domain: &AtomicDomain, ranges: &[(f64, f64)]) -> f64 {
    let abs_max = |(lo, hi): (f64, f64)| lo.abs().max(hi.abs());
    match domain.atom_set() {
        AtomSet::ScaledSimplex { a, tau } => ranges
            .iter()
            .zip(a)
            .map(|(r, ai)| tau / ai * abs_max(*r))
            .fold(0.0, f64::max),
        AtomSet::Explicit { atoms } => atoms
            .iter()
            .map(|z| {
                z.iter()
                    .zip(ranges)
                    .map(|(zk, r)| zk.abs() * abs_max(*r))
                    .sum::<f64>()
            })
            .fold(0.0, f64::max),
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}
