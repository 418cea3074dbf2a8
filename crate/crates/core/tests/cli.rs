use std::fs;
use std::process::{Command, Output};

fn pvm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pvm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_prints_summary() {
    let o = pvm(&["solve", "--problem", "quad-scaled", "-m", "10", "--method", "mdm"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("terminated    gap_reached"), "{out}");
    assert!(out.contains("method        MDM"));
}

#[test]
fn solve_writes_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let o = pvm(&["solve", "-m", "5", "--trace", trace.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&trace).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("stage,k,i,j,lambda,f,calc"));
    assert!(lines.count() > 0);
}

#[test]
fn bench_table_csv() {
    let o = pvm(&["bench", "--table", "1", "--format", "csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("method,m,it,calc,reached,gap_at_cap"));
    assert_eq!(lines.count(), 15);
    assert!(out.contains("CGM,5,"));
}

#[test]
fn bench_config_file_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    fs::write(
        &cfg,
        "name = \"small\"\nproblem = \"convex-scaled\"\nstart = \"vertex\"\ndims = [5, 10]\nmethods = [\"pvm\", \"cgm\"]\n\n[solver]\nmax_iterations = 200\n",
    )
    .unwrap();
    let out = dir.path().join("out.csv");
    let o = pvm(&["bench", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().nth(1).unwrap().starts_with("CGM,5,"));
}

#[test]
fn check_reports_stationarity() {
    let o = pvm(&["check", "-m", "3", "--tau", "1", "--point", "0.2,0.3,0.5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("stationary"));
}

#[test]
fn exit_codes() {
    assert_eq!(pvm(&["bench", "--table", "9"]).status.code(), Some(1));
    assert_eq!(pvm(&["--bogus"]).status.code(), Some(1));
    assert_eq!(pvm(&["--help"]).status.code(), Some(0));
    let o = pvm(&["check", "-m", "2", "--tau", "1", "--point", "0.9,0.9"]);
    assert_eq!(o.status.code(), Some(1));
    let o = pvm(&["bench", "--config", "/nonexistent/exp.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exhausted_line_search_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("strict.toml");
    fs::write(
        &cfg,
        "name = \"strict\"\nproblem = \"quad-simplex\"\ndims = [10]\nmethods = [\"mdm\"]\n\n[solver]\nbeta = 0.99\ntheta = 0.99\nmax_backtracks = 1\n",
    )
    .unwrap();
    let o = pvm(&["bench", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line search failed"));
}
