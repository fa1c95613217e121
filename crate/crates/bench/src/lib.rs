//! Benchmark harness: runs the continuation solver (and optionally the
//! projected-gradient baseline) over catalog problems and writes one row per
//! solve as a text table, JSON or CSV.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use rcmtr::problems::{self, Convexity};
use rcmtr::{baseline, solve, IterationRecord, SolverConfig, SolverReport, Status};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const SOLVER_NAME: &str = "rcmtr";
pub const BASELINE_NAME: &str = "projected-gradient";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] rcmtr::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "rcmtr-bench",
    about = "Benchmark the continuation solver on linearly constrained test problems"
)]
pub struct Cli {
    /// Problem name, comma-separated list, or one of all, all-convex, all-nonconvex.
    #[arg(long, required = true)]
    pub problem: String,
    /// Dimension override (fixed-dimension problems reject other values).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub sigma0: Option<f64>,
    #[arg(long)]
    pub dt0: Option<f64>,
    /// Any other solver setting, as field=value (e.g. eta_m=1e-6).
    #[arg(long = "set", value_name = "FIELD=VALUE")]
    pub set: Vec<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also run projected steepest descent on every problem.
    #[arg(long)]
    pub baseline: bool,
    /// Include per-iteration traces (JSON only).
    #[arg(long)]
    pub trace: bool,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// A validated benchmark request.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub problems: Vec<String>,
    pub n: Option<usize>,
    pub config: SolverConfig,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub baseline: bool,
    pub trace: bool,
    pub jobs: usize,
}

impl RunSpec {
    pub fn from_cli(cli: Cli) -> Result<Self, BenchError> {
        let problems = resolve_problems(&cli.problem)?;
        let mut config = SolverConfig::default();
        if let Some(v) = cli.max_iter {
            config.max_iter = v;
        }
        if let Some(v) = cli.tol {
            config.tol = v;
        }
        if let Some(v) = cli.sigma0 {
            config.sigma0 = v;
        }
        if let Some(v) = cli.dt0 {
            config.dt0 = v;
        }
        for assignment in &cli.set {
            apply_override(&mut config, assignment)?;
        }
        config
            .validate()
            .map_err(|e| BenchError::Usage(e.to_string()))?;
        let format = cli.format.unwrap_or_default();
        if cli.trace && format != Format::Json {
            return Err(BenchError::Usage("--trace requires --format json".into()));
        }
        if cli.jobs == 0 {
            return Err(BenchError::Usage("--jobs must be at least 1".into()));
        }
        Ok(Self {
            problems,
            n: cli.n,
            config,
            format,
            out: cli.out,
            baseline: cli.baseline,
            trace: cli.trace,
            jobs: cli.jobs,
        })
    }
}

fn resolve_problems(selection: &str) -> Result<Vec<String>, BenchError> {
    let catalog = problems::catalog();
    let mut names = Vec::new();
    for item in selection
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
    {
        let set: Vec<String> = match item {
            "all" => catalog.iter().map(|e| e.name.to_string()).collect(),
            "all-convex" => catalog
                .iter()
                .filter(|e| e.convexity == Convexity::Convex)
                .map(|e| e.name.to_string())
                .collect(),
            "all-nonconvex" => catalog
                .iter()
                .filter(|e| e.convexity == Convexity::NonConvex)
                .map(|e| e.name.to_string())
                .collect(),
            name => vec![problems::lookup(name)
                .map_err(|e| BenchError::Usage(e.to_string()))?
                .name
                .to_string()],
        };
        names.extend(set);
    }
    if names.is_empty() {
        return Err(BenchError::Usage("no problem selected".into()));
    }
    Ok(names)
}

fn apply_override(config: &mut SolverConfig, assignment: &str) -> Result<(), BenchError> {
    let (key, value) = assignment
        .split_once('=')
        .ok_or_else(|| BenchError::Usage(format!("expected FIELD=VALUE, got `{assignment}`")))?;
    let mut json = serde_json::to_value(&*config)?;
    let map = json
        .as_object_mut()
        .expect("config serializes to an object");
    let slot = map
        .get_mut(key.trim())
        .ok_or_else(|| BenchError::Usage(format!("unknown solver setting `{key}`")))?;
    let parsed: serde_json::Value = serde_json::from_str(value.trim())
        .unwrap_or_else(|_| serde_json::Value::String(value.trim().to_string()));
    *slot = parsed;
    *config = serde_json::from_value(json)
        .map_err(|e| BenchError::Usage(format!("bad value for `{key}`: {e}")))?;
    Ok(())
}

/// One solve, in the layout of the published result tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub problem: String,
    pub n: usize,
    pub m: usize,
    pub solver: String,
    pub steps: usize,
    pub time_s: f64,
    #[serde(with = "rcmtr::serde_float")]
    pub f_star: f64,
    #[serde(with = "rcmtr::serde_float")]
    pub kkt: f64,
    #[serde(with = "rcmtr::serde_float")]
    pub feas: f64,
    pub status: String,
}

impl BenchRow {
    fn from_report(problem: &str, n: usize, m: usize, solver: &str, report: &SolverReport) -> Self {
        Self {
            problem: problem.to_string(),
            n,
            m,
            solver: solver.to_string(),
            steps: report.iterations,
            time_s: report.wall_time.as_secs_f64(),
            f_star: report.f_star,
            kkt: report.kkt,
            feas: report.feas,
            status: report.status.as_str().to_string(),
        }
    }

    fn from_error(problem: &str, n: usize, m: usize, solver: &str, err: &rcmtr::Error) -> Self {
        Self {
            problem: problem.to_string(),
            n,
            m,
            solver: solver.to_string(),
            steps: 0,
            time_s: 0.0,
            f_star: f64::NAN,
            kkt: f64::NAN,
            feas: f64::NAN,
            status: format!("Error: {err}"),
        }
    }

    pub fn succeeded(&self) -> bool {
        self.status == Status::Converged.as_str()
            || self.status == Status::SingleFeasiblePoint.as_str()
    }
}

/// A row plus, when requested, its iteration trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    #[serde(flatten)]
    pub row: BenchRow,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<IterationRecord>>,
}

/// Solves every selected problem; rows follow the input order.
pub fn execute(spec: &RunSpec) -> Result<Vec<BenchRecord>, BenchError> {
    // within a set, fixed-dimension problems keep their own n
    let many = spec.problems.len() > 1;
    let instances = spec
        .problems
        .iter()
        .map(|name| {
            let entry = problems::lookup(name)?;
            let n = if many && entry.function().fixed_dim().is_some() {
                None
            } else {
                spec.n
            };
            entry.instantiate(n)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| BenchError::Usage(e.to_string()))?;

    let run_one = |p: &rcmtr::ProblemInstance| -> Vec<BenchRecord> {
        let n = p.dim();
        let m = p.constraints().rows();
        let mut out = Vec::new();
        let mut push = |solver: &str, result: rcmtr::Result<SolverReport>| {
            let record = match result {
                Ok(report) => BenchRecord {
                    row: BenchRow::from_report(p.name(), n, m, solver, &report),
                    trace: spec.trace.then(|| report.trace.clone()),
                },
                Err(err) => BenchRecord {
                    row: BenchRow::from_error(p.name(), n, m, solver, &err),
                    trace: None,
                },
            };
            out.push(record);
        };
        push(SOLVER_NAME, solve(p, &spec.config));
        if spec.baseline {
            push(BASELINE_NAME, baseline::projected_gradient(p, &spec.config));
        }
        out
    };

    let nested: Vec<Vec<BenchRecord>> = if spec.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.jobs)
            .build()
            .map_err(|e| BenchError::Usage(e.to_string()))?;
        pool.install(|| instances.par_iter().map(run_one).collect())
    } else {
        instances.iter().map(run_one).collect()
    };
    Ok(nested.into_iter().flatten().collect())
}

pub fn to_csv(rows: &[BenchRecord]) -> Result<String, BenchError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for record in rows {
        writer.serialize(&record.row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn from_csv(text: &str) -> Result<Vec<BenchRow>, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    Ok(reader.deserialize().collect::<Result<Vec<BenchRow>, _>>()?)
}

pub fn to_json(rows: &[BenchRecord]) -> Result<String, BenchError> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn from_json(text: &str) -> Result<Vec<BenchRecord>, BenchError> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_table(rows: &[BenchRecord]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<26} {:>6} {:>5} {:<19} {:>16} {:>24} {:>10}  status",
        "problem", "n", "m", "solver", "steps (time s)", "f(x*) (KKT)", "feas"
    );
    for r in rows.iter().map(|r| &r.row) {
        let steps = format!("{} ({:.3})", r.steps, r.time_s);
        let fk = format!("{:.4e} ({:.2e})", r.f_star, r.kkt);
        let _ = writeln!(
            out,
            "{:<26} {:>6} {:>5} {:<19} {:>16} {:>24} {:>10.2e}  {}",
            r.problem, r.n, r.m, r.solver, steps, fk, r.feas, r.status
        );
    }
    out
}

fn summary(rows: &[BenchRecord]) -> String {
    let mine: Vec<_> = rows
        .iter()
        .filter(|r| r.row.solver == SOLVER_NAME)
        .collect();
    let ok = mine.iter().filter(|r| r.row.succeeded()).count();
    format!("{SOLVER_NAME}: {ok}/{} solved", mine.len())
}

/// Runs the request, writes the output, and returns the process exit code:
/// 0 when every continuation solve converged, 1 otherwise.
pub fn run(spec: &RunSpec) -> Result<i32, BenchError> {
    let rows = execute(spec)?;
    let text = match spec.format {
        Format::Table => to_table(&rows),
        Format::Json => to_json(&rows)? + "\n",
        Format::Csv => to_csv(&rows)?,
    };
    match &spec.out {
        Some(path) => {
            fs::write(path, &text)?;
            println!("{}", summary(&rows));
        }
        None => {
            io::stdout().write_all(text.as_bytes())?;
            eprintln!("{}", summary(&rows));
        }
    }
    let all_ok = rows
        .iter()
        .filter(|r| r.row.solver == SOLVER_NAME)
        .all(|r| r.row.succeeded());
    Ok(if all_ok { EXIT_OK } else { EXIT_FAILED })
}

/// Parses `args` and runs; usage errors map to exit code 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = RunSpec::from_cli(cli).and_then(|spec| run(&spec));
    match result {
        Ok(code) => code,
        Err(BenchError::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAILED
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(args: &[&str]) -> Result<RunSpec, BenchError> {
        let mut argv = vec!["rcmtr-bench"];
        argv.extend_from_slice(args);
        RunSpec::from_cli(Cli::try_parse_from(argv).map_err(|e| BenchError::Usage(e.to_string()))?)
    }

    #[test]
    fn problem_sets_expand() {
        let s = spec(&["--problem", "all-convex"]).unwrap();
        assert!(s.problems.contains(&"sphere".to_string()));
        assert!(!s.problems.contains(&"rosenbrock".to_string()));
        let s = spec(&["--problem", "booth,beale"]).unwrap();
        assert_eq!(s.problems, vec!["booth", "beale"]);
        assert_eq!(
            spec(&["--problem", "all"]).unwrap().problems.len(),
            problems::catalog().len()
        );
    }

    #[test]
    fn overrides_apply() {
        let s = spec(&[
            "--problem",
            "booth",
            "--max-iter",
            "400",
            "--tol",
            "1e-8",
            "--set",
            "eta_m=1e-6",
            "--set",
            "hessian_mode=Analytic",
        ])
        .unwrap();
        assert_eq!(s.config.max_iter, 400);
        assert_eq!(s.config.tol, 1e-8);
        assert_eq!(s.config.eta_m, 1e-6);
        assert_eq!(s.config.hessian_mode, rcmtr::HessianMode::Analytic);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(
            spec(&["--problem", "nosuch"]),
            Err(BenchError::Usage(_))
        ));
        assert!(matches!(
            spec(&["--problem", "booth", "--set", "nope=1"]),
            Err(BenchError::Usage(_))
        ));
        assert!(matches!(
            spec(&["--problem", "booth", "--set", "gamma2=3"]),
            Err(BenchError::Usage(_))
        ));
        assert!(matches!(
            spec(&["--problem", "booth", "--trace"]),
            Err(BenchError::Usage(_))
        ));
        assert!(spec(&["--problem", "booth", "--format", "csv", "--format", "json"]).is_err());
        assert!(spec(&["--problem", "booth", "--bogus"]).is_err());
    }
}
