use std::fmt::Write as _;
use std::str::FromStr;

use super::experiment::ResultRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    Csv,
    #[default]
    Text,
}

impl FromStr for TableFormat {
    type Err = Error;

    /// An empty string selects the default text layout.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "text" | "" => Ok(TableFormat::Text),
            other => Err(Error::Config(format!("unknown table format {other:?}"))),
        }
    }
}

pub const CSV_HEADER: [&str; 6] = ["method", "m", "it", "calc", "reached", "gap_at_cap"];

pub fn emit_table(rows: &[ResultRow], format: TableFormat) -> Result<String> {
    match format {
        TableFormat::Csv => emit_csv(rows),
        TableFormat::Text => Ok(emit_text(rows)),
    }
}

fn emit_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.method.to_string(),
            r.m.to_string(),
            r.it.to_string(),
            r.calc.to_string(),
            r.reached.to_string(),
            r.gap_at_cap.map(|g| g.to_string()).unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Cell text: `it / calc`, or `at it / calc, gap g` for runs that missed the target.
pub fn cell_text(r: &ResultRow) -> String {
    match r.gap_at_cap {
        None => format!("{} / {}", r.it, r.calc),
        Some(g) => format!("at {} / {}, gap {:.2}", r.it, r.calc, g),
    }
}

/// One line per `m`, one column per method, in first-seen order.
fn emit_text(rows: &[ResultRow]) -> String {
    let mut methods = Vec::new();
    let mut dims = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
        if !dims.contains(&r.m) {
            dims.push(r.m);
        }
    }
    dims.sort_unstable();
    let width = rows.iter().map(|r| cell_text(r).len()).max().unwrap_or(0).max(10);
    let mut out = format!("{:>7}", "");
    for m in &methods {
        let _ = write!(out, " | {:>width$}", m.to_string());
    }
    out.push('\n');
    for &m in &dims {
        let _ = write!(out, "m = {m:<3}");
        for &method in &methods {
            let cell = rows
                .iter()
                .find(|r| r.m == m && r.method == method)
                .map(cell_text)
                .unwrap_or_else(|| "-".into());
            let _ = write!(out, " | {cell:>width$}");
        }
        out.push('\n');
    }
    out
}
