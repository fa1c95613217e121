use std::process::Command;

use rcmtr_bench::{
    from_csv, from_json, to_csv, to_json, BenchRecord, BenchRow, BASELINE_NAME, SOLVER_NAME,
};

fn bench() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rcmtr-bench"))
}

fn run_json(args: &[&str]) -> (i32, Vec<BenchRecord>) {
    let out = bench()
        .args(args)
        .args(["--format", "json"])
        .output()
        .unwrap();
    let records = from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    (out.status.code().unwrap(), records)
}

#[test]
fn booth_json() {
    let (code, rows) = run_json(&["--problem", "booth"]);
    assert_eq!(code, 0);
    assert_eq!(rows.len(), 1);
    let row = &rows[0].row;
    assert_eq!((row.n, row.m), (2, 1));
    assert_eq!(row.solver, SOLVER_NAME);
    assert!((row.f_star - 9.0).abs() < 1e-6, "{}", row.f_star);
    assert!(row.kkt <= 1e-6);
}

#[test]
fn sphere_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sphere.csv");
    let out = bench()
        .args([
            "--problem",
            "sphere",
            "--n",
            "1000",
            "--format",
            "csv",
            "--out",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows = from_csv(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].n, 1000);
    assert_eq!(rows[0].m, 500);
    assert_eq!(rows[0].status, "Converged");
}

#[test]
fn unknown_problem_is_usage_error() {
    let out = bench().args(["--problem", "nosuch"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nosuch"));
}

#[test]
fn bad_arguments_are_usage_errors() {
    for args in [
        vec!["--problem", "booth", "--n", "7"],
        vec!["--problem", "booth", "--set", "nope=1"],
        vec!["--problem", "booth", "--trace"],
        vec!["--problem", "booth", "--jobs", "0"],
        vec!["--problem", "booth", "--tol", "-1"],
        vec!["--n", "3"],
    ] {
        let out = bench().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn max_iterations_exits_one() {
    let out = bench()
        .args(["--problem", "trid", "--n", "200", "--max-iter", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_and_json_round_trip() {
    let (_, records) = run_json(&[
        "--problem",
        "booth,matyas,three_hump_camel",
        "--baseline",
        "--trace",
    ]);
    assert_eq!(records.len(), 6);
    assert!(records
        .iter()
        .all(|r| r.trace.as_ref().is_some_and(|t| !t.is_empty())));
    let json = to_json(&records).unwrap();
    assert_eq!(from_json(&json).unwrap(), records);

    let csv = to_csv(&records).unwrap();
    let rows: Vec<BenchRow> = records.iter().map(|r| r.row.clone()).collect();
    assert_eq!(from_csv(&csv).unwrap(), rows);
}

#[test]
fn error_rows_round_trip() {
    let row = BenchRow {
        problem: "zakharov".into(),
        n: 10,
        m: 5,
        solver: SOLVER_NAME.into(),
        steps: 0,
        time_s: 0.0,
        f_star: f64::NAN,
        kkt: f64::INFINITY,
        feas: f64::NEG_INFINITY,
        status: "Error: singular, \"quoted\"".into(),
    };
    let records = vec![BenchRecord {
        row: row.clone(),
        trace: None,
    }];

    let back = from_csv(&to_csv(&records).unwrap()).unwrap();
    assert_eq!(back.len(), 1);
    assert!(back[0].f_star.is_nan());
    assert_eq!(back[0].kkt, f64::INFINITY);
    assert_eq!(back[0].feas, f64::NEG_INFINITY);
    assert_eq!(back[0].status, row.status);

    let back = from_json(&to_json(&records).unwrap()).unwrap();
    assert!(back[0].row.f_star.is_nan());
    assert_eq!(back[0].row.kkt, f64::INFINITY);
}

#[test]
fn repeated_runs_match_except_time() {
    let args = [
        "--problem",
        "all-convex",
        "--n",
        "50",
        "--baseline",
        "--jobs",
        "4",
    ];
    let strip = |mut rows: Vec<BenchRecord>| {
        for r in &mut rows {
            r.row.time_s = 0.0;
        }
        rows
    };
    let (_, first) = run_json(&args);
    let (_, second) = run_json(&args);
    let (first, second) = (strip(first), strip(second));
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.row.problem, b.row.problem);
        assert_eq!(a.row.steps, b.row.steps);
        assert_eq!(
            a.row.f_star.to_bits(),
            b.row.f_star.to_bits(),
            "{}",
            a.row.problem
        );
        assert_eq!(
            a.row.kkt.to_bits(),
            b.row.kkt.to_bits(),
            "{}",
            a.row.problem
        );
        assert_eq!(a.row.status, b.row.status);
    }
}

#[test]
fn continuation_takes_no_more_steps_than_baseline_on_convex_problems() {
    let (_, records) = run_json(&[
        "--problem",
        "all-convex",
        "--n",
        "100",
        "--baseline",
        "--jobs",
        "8",
    ]);
    let mut wins = 0;
    let mut total = 0;
    let mut losses = Vec::new();
    for pair in records.chunks(2) {
        let (ours, base) = (&pair[0].row, &pair[1].row);
        assert_eq!(ours.solver, SOLVER_NAME);
        assert_eq!(base.solver, BASELINE_NAME);
        total += 1;
        if ours.succeeded() && base.steps >= ours.steps {
            wins += 1;
        } else {
            losses.push(format!(
                "{}: {} vs {}",
                ours.problem, ours.steps, base.steps
            ));
        }
    }
    assert!(
        wins * 5 >= total * 4,
        "baseline needed at least as many steps in {wins}/{total} runs; losses: {losses:?}"
    );
}
