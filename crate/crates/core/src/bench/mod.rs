//! Benchmark harness: problem generators, experiment specs, the built-in
//! reference tables, and table output.

mod config;
mod experiment;
mod reference;
mod problems;
mod table;

pub use config::{load_spec, parse_spec};
pub use experiment::{
    resolve_step, run_cell, run_cells, run_experiment, CellRun, ExperimentSpec, ResultRow,
};
pub use reference::{reference_table, reference_tables, ReferenceCell, ReferenceTable, TABLE_SCHEDULE};
pub use problems::{build_problem, scaled_coefficients, Problem, ProblemFamily, StartKind};
pub use table::{cell_text, emit_table, TableFormat, CSV_HEADER};
