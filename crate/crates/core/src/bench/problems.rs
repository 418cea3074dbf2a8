use std::fmt;
use std::str::FromStr;

use crate::domain::{AtomicDomain, WeightedPoint};
use crate::error::{Error, Result};
use crate::objective::{ConvexBarrierObjective, Objective, QMode, QuadraticObjective};

/// Named problem generators: objective family crossed with feasible set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemFamily {
    QuadSimplex,
    ConvexSimplex,
    QuadScaled,
    ConvexScaled,
}

impl ProblemFamily {
    pub fn is_scaled(self) -> bool {
        matches!(self, ProblemFamily::QuadScaled | ProblemFamily::ConvexScaled)
    }

    pub fn is_convex_barrier(self) -> bool {
        matches!(self, ProblemFamily::ConvexSimplex | ProblemFamily::ConvexScaled)
    }

    /// `q = 0` on the plain simplex, `q_i = sin(i)/i` on the scaled one.
    pub fn default_q_mode(self) -> QMode {
        if self.is_scaled() {
            QMode::SinOverI
        } else {
            QMode::Zero
        }
    }
}

impl FromStr for ProblemFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quad-simplex" => Ok(ProblemFamily::QuadSimplex),
            "convex-simplex" => Ok(ProblemFamily::ConvexSimplex),
            "quad-scaled" => Ok(ProblemFamily::QuadScaled),
            "convex-scaled" => Ok(ProblemFamily::ConvexScaled),
            other => Err(Error::Config(format!("unknown problem generator {other:?}"))),
        }
    }
}

impl fmt::Display for ProblemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProblemFamily::QuadSimplex => "quad-simplex",
            ProblemFamily::ConvexSimplex => "convex-simplex",
            ProblemFamily::QuadScaled => "quad-scaled",
            ProblemFamily::ConvexScaled => "convex-scaled",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StartKind {
    /// All atoms equally weighted; `(tau/m) e` on the plain simplex.
    Uniform,
    /// The first atom, `(tau/a_1) e^1`.
    FirstVertex,
}

impl FromStr for StartKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "x'" | "x1" => Ok(StartKind::Uniform),
            "vertex" | "x''" | "x2" => Ok(StartKind::FirstVertex),
            other => Err(Error::Config(format!("unknown start {other:?}"))),
        }
    }
}

impl fmt::Display for StartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StartKind::Uniform => "uniform",
            StartKind::FirstVertex => "vertex",
        })
    }
}

impl StartKind {
    pub fn point(self, domain: &AtomicDomain) -> WeightedPoint {
        match self {
            StartKind::Uniform => WeightedPoint::barycenter(domain),
            StartKind::FirstVertex => {
                WeightedPoint::vertex(domain, 0).expect("domains have at least one atom")
            }
        }
    }
}

/// A generated instance.
pub struct Problem {
    pub family: ProblemFamily,
    pub domain: AtomicDomain,
    pub objective: Box<dyn Objective>,
}

/// `a_i = 1.5 + sin(i)` with 1-based `i`.
pub fn scaled_coefficients(m: usize) -> Vec<f64> {
    (1..=m).map(|i| 1.5 + (i as f64).sin()).collect()
}

pub fn build_problem(family: ProblemFamily, m: usize, q_mode: QMode, tau: f64) -> Result<Problem> {
    if m == 0 {
        return Err(Error::Config("dimension must be at least 1".into()));
    }
    let domain = if family.is_scaled() {
        AtomicDomain::scaled_simplex(scaled_coefficients(m), tau)?
    } else {
        AtomicDomain::simplex(m, tau)?
    };
    let objective: Box<dyn Objective> = if family.is_convex_barrier() {
        Box::new(ConvexBarrierObjective::benchmark(m, q_mode))
    } else {
        Box::new(QuadraticObjective::benchmark(m, q_mode))
    };
    Ok(Problem {
        family,
        domain,
        objective,
    })
}
