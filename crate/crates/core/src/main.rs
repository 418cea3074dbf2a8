use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pvm::bench::{
    build_problem, cell_text, emit_table, load_spec, reference_table, reference_tables, resolve_step,
    run_experiment, ExperimentSpec, Problem, ProblemFamily, StartKind, TableFormat,
};
use pvm::diagnostics::{check_stationarity, gap, STATIONARITY_TOL};
use pvm::{AtomicDomain, Error, Method, QMode, Result, SolverConfig, StepKind, WeightedPoint};

#[derive(Parser)]
#[command(name = "pvm", version, about = "Pairwise variation method and baselines over atomic domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one method on one generated problem.
    Solve(SolveArgs),
    /// Run an experiment from a config file or a built-in table number.
    Bench(BenchArgs),
    /// Gap and stationarity of a given point.
    Check(CheckArgs),
    /// Run the six built-in tables and print the reference counts next to each cell.
    PaperTables(PaperArgs),
}

#[derive(Args)]
struct ProblemArgs {
    /// quad-simplex, convex-simplex, quad-scaled or convex-scaled.
    #[arg(long, alias = "grad-of", default_value = "quad-simplex")]
    problem: ProblemFamily,
    /// simplex or scaled; overrides the feasible set of --problem.
    #[arg(long)]
    domain: Option<String>,
    /// Dimension; 10 by default, or the length of --point for `check`.
    #[arg(long = "m", short = 'm', alias = "dim")]
    dim: Option<usize>,
    /// zero or sin_over_i; defaults to the generator's own choice.
    #[arg(long)]
    q: Option<QMode>,
    #[arg(long, default_value_t = 10.0)]
    tau: f64,
    /// CSV file of atoms (one per row) replacing the generated feasible set.
    #[arg(long)]
    atoms: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value = "pvm")]
    method: Method,
    /// uniform or vertex.
    #[arg(long, default_value = "uniform")]
    start: StartKind,
    /// armijo, fixed or divergent.
    #[arg(long, default_value = "armijo")]
    step: StepKind,
    #[arg(long)]
    delta0: Option<f64>,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    target_gap: Option<f64>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    max_stages: Option<usize>,
    #[arg(long)]
    gap_check_every: Option<usize>,
    /// Write one CSV row per accepted step.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Built-in table number (1 to 6).
    #[arg(long, conflicts_with = "config")]
    table: Option<usize>,
    /// TOML experiment file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// csv or text.
    #[arg(long, default_value = "text")]
    format: TableFormat,
    /// Write the table here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Comma-separated coordinates.
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    #[arg(long, default_value_t = STATIONARITY_TOL)]
    tol: f64,
}

#[derive(Args)]
struct PaperArgs {
    #[arg(long, default_value = "text")]
    format: TableFormat,
    /// Also write tableN.csv files into this directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match cli.command {
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Check(args) => check(args),
        Command::PaperTables(args) => paper_tables(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_contract_violation() { 2 } else { 1 })
        }
    }
}

fn family(args: &ProblemArgs) -> Result<ProblemFamily> {
    let barrier = args.problem.is_convex_barrier();
    Ok(match args.domain.as_deref() {
        None => args.problem,
        Some("simplex") if barrier => ProblemFamily::ConvexSimplex,
        Some("simplex") => ProblemFamily::QuadSimplex,
        Some("scaled") if barrier => ProblemFamily::ConvexScaled,
        Some("scaled") => ProblemFamily::QuadScaled,
        Some(other) => return Err(Error::Config(format!("unknown domain {other:?} (simplex or scaled)"))),
    })
}

fn make_problem(args: &ProblemArgs, default_dim: usize) -> Result<Problem> {
    let family = family(args)?;
    let q = args.q.unwrap_or(family.default_q_mode());
    match &args.atoms {
        None => build_problem(family, args.dim.unwrap_or(default_dim), q, args.tau),
        Some(path) => {
            let domain = AtomicDomain::from_csv_path(path)?;
            let mut p = build_problem(family, domain.dim(), q, args.tau)?;
            p.domain = domain;
            Ok(p)
        }
    }
}

fn solve(args: SolveArgs) -> Result<()> {
    let problem = make_problem(&args.problem, 10)?;
    let mut spec = ExperimentSpec::new("solve", problem.family, args.start);
    spec.step = args.step;
    let cfg = &mut spec.solver;
    let sched = &mut cfg.schedule;
    sched.delta0 = args.delta0.unwrap_or(sched.delta0);
    sched.eps0 = args.eps0.unwrap_or(sched.eps0);
    sched.nu = args.nu.unwrap_or(sched.nu);
    cfg.stop.target_gap = args.target_gap.unwrap_or(cfg.stop.target_gap);
    cfg.stop.max_inner_iterations = args.max_iterations.unwrap_or(cfg.stop.max_inner_iterations);
    cfg.stop.max_stages = args.max_stages.unwrap_or(cfg.stop.max_stages);
    cfg.gap_check_every = args.gap_check_every.unwrap_or(cfg.gap_check_every);
    spec.validate()?;

    let (step_rule, _) = resolve_step(spec.step, &problem)?;
    let config = SolverConfig { step_rule, ..spec.solver };
    let start = args.start.point(&problem.domain);
    let report = args.method.solve(&problem.domain, problem.objective.as_ref(), &config, &start)?;

    println!("method        {}", report.method);
    println!("problem       {} (n = {}, m = {})", problem.family, problem.domain.n(), problem.domain.dim());
    println!("step          {}", spec.step);
    println!("terminated    {}", report.terminated_by);
    println!("it            {}", report.iterations);
    println!("calc          {}", report.partial_calls);
    println!("value calls   {}", report.value_calls);
    println!("stages        {}", report.restarts.len());
    println!("f             {:.10}", report.f_trajectory.last().copied().unwrap_or(f64::NAN));
    println!("gap           {:.6e}", report.final_gap);
    println!("support       {}", report.final_point.support_len());
    if let Some(path) = args.trace {
        report.write_trace_csv(fs::File::create(&path)?)?;
        println!("trace         {}", path.display());
    }
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let spec = match (args.table, &args.config) {
        (Some(n), None) => {
            reference_table(n)
                .ok_or_else(|| Error::Config(format!("no built-in table {n} (expected 1 to 6)")))?
                .spec
        }
        (None, Some(path)) => load_spec(path)?,
        _ => return Err(Error::Config("bench needs --table N or --config FILE".into())),
    };
    let rows = run_experiment(&spec)?;
    let out = emit_table(&rows, args.format)?;
    match args.out {
        Some(path) => fs::write(path, out)?,
        None => print!("{out}"),
    }
    Ok(())
}

fn check(args: CheckArgs) -> Result<()> {
    let x = args
        .point
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad coordinate {s:?}: {e}")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let problem = make_problem(&args.problem, x.len())?;
    if x.len() != problem.domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: problem.domain.dim(),
            got: x.len(),
        });
    }
    let wp: WeightedPoint = problem.domain.weights_of(&x)?;
    let mut g = vec![0.0; x.len()];
    problem.objective.gradient(wp.point(), &mut g);
    let report = check_stationarity(&problem.domain, &wp, &g, args.tol);
    println!("f             {:.10}", problem.objective.value(wp.point()));
    println!("gap           {:.6e}", gap(&problem.domain, &g, wp.point()));
    println!("stationary    {}", report.is_stationary);
    println!("violation     {:.6e}", report.worst_violation);
    if let Some((i, j)) = report.witness {
        println!("witness       move weight from atom {i} to atom {j}");
    }
    Ok(())
}

fn paper_tables(args: PaperArgs) -> Result<()> {
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir)?;
    }
    for table in reference_tables() {
        let rows = run_experiment(&table.spec)?;
        if let Some(dir) = &args.out_dir {
            let csv = emit_table(&rows, TableFormat::Csv)?;
            fs::write(dir.join(format!("table{}.csv", table.number)), csv)?;
        }
        match args.format {
            TableFormat::Csv => {
                println!("# table {}: {}", table.number, table.title);
                print!("{}", emit_table(&rows, TableFormat::Csv)?);
            }
            TableFormat::Text => {
                println!("Table {}: {}", table.number, table.title);
                for r in &rows {
                    let reference = table.cell(r.method, r.m).map(|c| match c.it {
                        Some(it) => format!("{it} / {}", c.calc),
                        None => format!("at 500 / {}, gap {:.2}", c.calc, c.gap_at_cap.unwrap_or(f64::NAN)),
                    });
                    println!(
                        "  {:<4} m = {:<3} {:>26}   reference {}",
                        r.method.to_string(),
                        r.m,
                        cell_text(r),
                        reference.unwrap_or_else(|| "-".into())
                    );
                }
            }
        }
        println!();
    }
    Ok(())
}
