use super::experiment::ExperimentSpec;
use super::problems::{ProblemFamily, StartKind};
use crate::solvers::{Method, ToleranceSchedule};

/// Stage schedule used by the built-in tables. The library default (`delta0 = 1`)
/// is far below the size of the atom values on these problems (gradients of
/// order 10 to 1000 with `tau = 10`), which makes almost any `j` pass the
/// threshold test and stalls the method at `m >= 50`.
pub const TABLE_SCHEDULE: ToleranceSchedule = ToleranceSchedule {
    delta0: 100.0,
    eps0: 0.01,
    nu: 0.5,
};

/// A reference cell: `Some(it)` when the target was reached, `None` when the
/// run stopped at the 500 iteration cap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub method: Method,
    pub m: usize,
    pub it: Option<usize>,
    pub calc: u64,
    pub gap_at_cap: Option<f64>,
}

/// A built-in table: the experiment setup and its reference values.
#[derive(Debug, Clone)]
pub struct ReferenceTable {
    pub number: usize,
    pub title: &'static str,
    pub spec: ExperimentSpec,
    pub cells: Vec<ReferenceCell>,
}

impl ReferenceTable {
    pub fn cell(&self, method: Method, m: usize) -> Option<&ReferenceCell> {
        self.cells.iter().find(|c| c.method == method && c.m == m)
    }
}

type Raw = (usize, i64, u64, f64);

// (m, it or -1 for "at 500", calc, gap at cap or 0), per method in CGM, MDM, PVM order
const TABLE_1: [[Raw; 5]; 3] = [
    [(5, 202, 1010, 0.0), (10, -1, 5000, 0.25), (20, -1, 10000, 0.11), (50, -1, 25000, 0.39), (100, -1, 50000, 0.62)],
    [(5, 11, 55, 0.0), (10, 34, 340, 0.0), (20, 49, 980, 0.0), (50, 87, 4350, 0.0), (100, 221, 22100, 0.0)],
    [(5, 11, 53, 0.0), (10, 37, 279, 0.0), (20, 50, 703, 0.0), (50, 108, 3574, 0.0), (100, 267, 17594, 0.0)],
];
const TABLE_2: [[Raw; 5]; 3] = [
    [(5, 47, 235, 0.0), (10, 194, 1940, 0.0), (20, -1, 10000, 0.44), (50, -1, 25000, 1.22), (100, -1, 50000, 2.93)],
    [(5, 14, 70, 0.0), (10, 37, 370, 0.0), (20, 124, 2480, 0.0), (50, 326, 16300, 0.0), (100, -1, 50000, 0.31)],
    [(5, 17, 74, 0.0), (10, 42, 307, 0.0), (20, 124, 1668, 0.0), (50, 211, 7046, 0.0), (100, 399, 25213, 0.0)],
];
const TABLE_3: [[Raw; 5]; 3] = [
    [(5, 203, 1015, 0.0), (10, -1, 5000, 0.21), (20, 491, 9820, 0.0), (50, -1, 25000, 0.41), (100, -1, 50000, 0.61)],
    [(5, 11, 55, 0.0), (10, 34, 340, 0.0), (20, 53, 1060, 0.0), (50, 83, 4150, 0.0), (100, 211, 21100, 0.0)],
    [(5, 11, 53, 0.0), (10, 38, 287, 0.0), (20, 46, 666, 0.0), (50, 107, 3427, 0.0), (100, 267, 17012, 0.0)],
];
const TABLE_4: [[Raw; 5]; 3] = [
    [(5, 44, 220, 0.0), (10, 198, 1980, 0.0), (20, -1, 10000, 0.45), (50, -1, 25000, 1.24), (100, -1, 50000, 2.97)],
    [(5, 14, 70, 0.0), (10, 37, 370, 0.0), (20, 114, 2280, 0.0), (50, 319, 15950, 0.0), (100, -1, 50000, 0.33)],
    [(5, 15, 67, 0.0), (10, 43, 312, 0.0), (20, 138, 1839, 0.0), (50, 227, 7354, 0.0), (100, 405, 25758, 0.0)],
];
const TABLE_5: [[Raw; 5]; 3] = [
    [(5, 20, 100, 0.0), (10, 82, 820, 0.0), (20, 199, 3980, 0.0), (50, -1, 25000, 0.21), (100, -1, 50000, 0.62)],
    [(5, 9, 45, 0.0), (10, 29, 290, 0.0), (20, 48, 960, 0.0), (50, 101, 5050, 0.0), (100, 203, 20300, 0.0)],
    [(5, 11, 48, 0.0), (10, 27, 210, 0.0), (20, 49, 644, 0.0), (50, 119, 3630, 0.0), (100, 286, 17080, 0.0)],
];
const TABLE_6: [[Raw; 5]; 3] = [
    [(5, 20, 100, 0.0), (10, 79, 790, 0.0), (20, 204, 4080, 0.0), (50, -1, 25000, 0.19), (100, -1, 50000, 0.64)],
    [(5, 7, 35, 0.0), (10, 27, 270, 0.0), (20, 49, 980, 0.0), (50, 100, 5000, 0.0), (100, 210, 21000, 0.0)],
    [(5, 11, 48, 0.0), (10, 25, 189, 0.0), (20, 51, 677, 0.0), (50, 117, 3618, 0.0), (100, 307, 18468, 0.0)],
];

fn cells(raw: &[[Raw; 5]; 3]) -> Vec<ReferenceCell> {
    Method::ALL
        .iter()
        .zip(raw)
        .flat_map(|(&method, row)| {
            row.iter().map(move |&(m, it, calc, g)| ReferenceCell {
                method,
                m,
                it: (it >= 0).then_some(it as usize),
                calc,
                gap_at_cap: (it < 0).then_some(g),
            })
        })
        .collect()
}

type Setup = (usize, &'static str, ProblemFamily, StartKind, &'static [[Raw; 5]; 3]);

/// The six built-in tables.
pub fn reference_tables() -> Vec<ReferenceTable> {
    use ProblemFamily::*;
    use StartKind::*;
    let setups: [Setup; 6] = [
        (1, "quadratic, simplex, uniform start", QuadSimplex, Uniform, &TABLE_1),
        (2, "quadratic, simplex, vertex start", QuadSimplex, FirstVertex, &TABLE_2),
        (3, "convex, simplex, uniform start", ConvexSimplex, Uniform, &TABLE_3),
        (4, "convex, simplex, vertex start", ConvexSimplex, FirstVertex, &TABLE_4),
        (5, "quadratic, scaled simplex, vertex start", QuadScaled, FirstVertex, &TABLE_5),
        (6, "convex, scaled simplex, vertex start", ConvexScaled, FirstVertex, &TABLE_6),
    ];
    setups
        .into_iter()
        .map(|(number, title, family, start, raw)| {
            let mut spec = ExperimentSpec::new(format!("table{number}"), family, start);
            spec.solver.schedule = TABLE_SCHEDULE;
            spec.solver.gap_check_every = 1;
            ReferenceTable {
                number,
                title,
                spec,
                cells: cells(raw),
            }
        })
        .collect()
}

pub fn reference_table(number: usize) -> Option<ReferenceTable> {
    reference_tables().into_iter().find(|t| t.number == number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_tables_of_fifteen_cells() {
        let tables = reference_tables();
        assert_eq!(tables.len(), 6);
        for t in &tables {
            assert_eq!(t.cells.len(), 15);
            for c in t.cells.iter().filter(|c| c.method != Method::Pvm) {
                assert_eq!(c.calc, (c.m * c.it.unwrap_or(500)) as u64);
            }
        }
        let t1 = reference_table(1).unwrap();
        assert_eq!(t1.cell(Method::Pvm, 5).unwrap().it, Some(11));
        assert_eq!(t1.cell(Method::Cgm, 10).unwrap().gap_at_cap, Some(0.25));
        assert_eq!(reference_table(5).unwrap().cell(Method::Mdm, 10).unwrap().calc, 290);
        assert!(reference_table(7).is_none());
    }
}
