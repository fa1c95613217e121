use nalgebra::{dvector, DMatrix, DVector};
use rcmtr::problems::{catalog, problem};
use rcmtr::{
    solve, solve_with_observer, ConstraintSystem, HessianMode, IterationRecord, Phase,
    ProblemInstance, SolverConfig, Status,
};

fn row_sum_norm(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn instances() -> Vec<ProblemInstance> {
    [
        "sphere",
        "sum_squares",
        "rosenbrock",
        "styblinski_tang",
        "levy",
        "booth",
        "beale",
    ]
    .into_iter()
    .map(|name| {
        let n = if matches!(name, "booth" | "beale") {
            None
        } else {
            Some(100)
        };
        problem(name, n).unwrap()
    })
    .collect()
}

#[test]
fn steps_stay_in_the_null_space() {
    for p in instances() {
        let a = p.constraints().a().clone();
        let a_norm = row_sum_norm(&a);
        let mut worst_step: f64 = 0.0;
        let mut worst_dir: f64 = 0.0;
        solve_with_observer(&p, &SolverConfig::default(), |e| {
            let s = e.step.amax().max(f64::MIN_POSITIVE);
            let d = e.direction.amax().max(f64::MIN_POSITIVE);
            worst_step = worst_step.max((&a * e.step).amax() / (a_norm * s));
            worst_dir = worst_dir.max((&a * e.direction).amax() / (a_norm * d));
        })
        .unwrap();
        assert!(worst_step <= 1e-8, "{}: {worst_step:e}", p.name());
        assert!(worst_dir <= 1e-8, "{}: {worst_dir:e}", p.name());
    }
}

#[test]
fn well_posed_model_decrease_is_bounded_below() {
    for p in instances() {
        let mut checked = 0;
        solve_with_observer(&p, &SolverConfig::default(), |e| {
            if e.record.phase != Phase::WellPosed {
                return;
            }
            let dt = e.dt_trial;
            let bound = dt / (4.0 * (1.0 + dt)) * e.pg_prev.norm_squared();
            assert!(
                e.record.decrease >= bound * (1.0 - 1e-10) - 1e-12,
                "{} k={}: decrease {} < {bound}",
                p.name(),
                e.record.k,
                e.record.decrease
            );
            checked += 1;
        })
        .unwrap();
        assert!(checked > 0, "{}", p.name());
    }
}

#[test]
fn accepted_steps_pass_the_ratio_test_and_rejections_keep_the_iterate() {
    let config = SolverConfig::default();
    for p in instances() {
        solve_with_observer(&p, &config, |e| {
            if e.record.accepted {
                assert!(e.record.rho >= config.eta_a);
                assert_eq!(&e.state.x, &(e.x_prev + e.step));
            } else {
                assert_eq!(&e.state.x, e.x_prev);
            }
        })
        .unwrap();
    }
}

#[test]
fn every_catalog_problem_terminates() {
    let config = SolverConfig {
        max_iter: 150,
        ..SolverConfig::default()
    };
    for entry in catalog() {
        let n = entry.function().fixed_dim().unwrap_or(20);
        let p = entry.instantiate(Some(n)).unwrap();
        match solve(&p, &config) {
            Ok(r) => {
                assert!(r.iterations <= config.max_iter, "{}", entry.name);
                assert_eq!(r.trace.len(), r.iterations);
                assert_eq!(
                    r.accepted_steps,
                    r.trace.iter().filter(|t| t.accepted).count()
                );
                if r.status == Status::Converged {
                    assert!(
                        r.kkt <= config.tol && r.feas <= config.tol,
                        "{}",
                        entry.name
                    );
                }
            }
            Err(e) => panic!("{}: {e}", entry.name),
        }
    }
}

#[test]
fn analytic_and_difference_hessians_agree() {
    let p = problem("rosenbrock", Some(20)).unwrap();
    let fd = solve(&p, &SolverConfig::default()).unwrap();
    let exact = solve(
        &p,
        &SolverConfig {
            hessian_mode: HessianMode::Analytic,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    assert_eq!(fd.status, Status::Converged);
    assert_eq!(exact.status, Status::Converged);
    assert!((fd.f_star - exact.f_star).abs() <= 1e-8 * fd.f_star.abs().max(1.0));
}

#[test]
fn single_feasible_point_needs_no_iterations() {
    let cs = ConstraintSystem::new(DMatrix::identity(2, 2), dvector![1.0, -3.0]).unwrap();
    let p = problem("booth", None).unwrap();
    let p = ProblemInstance::new(
        "point",
        cs,
        std::sync::Arc::new(rcmtr::problems::TestFunction::Booth),
    )
    .with_start(p.start().clone())
    .unwrap();
    let r = solve(&p, &SolverConfig::default()).unwrap();
    assert_eq!(r.status, Status::SingleFeasiblePoint);
    assert_eq!(r.iterations, 0);
    assert_eq!(r.x_star, dvector![1.0, -3.0]);
}

#[test]
fn invalid_settings_are_rejected() {
    let p = problem("booth", None).unwrap();
    for config in [
        SolverConfig {
            tol: 0.0,
            ..SolverConfig::default()
        },
        SolverConfig {
            dt0: -1.0,
            ..SolverConfig::default()
        },
        SolverConfig {
            sigma0: f64::NAN,
            ..SolverConfig::default()
        },
        SolverConfig {
            fd_eps: 0.0,
            ..SolverConfig::default()
        },
    ] {
        assert!(solve(&p, &config).is_err());
    }
}

#[test]
fn iteration_records_survive_json_with_non_finite_values() {
    let record = IterationRecord {
        k: 3,
        f: 1.5,
        kkt: f64::NAN,
        feas: 0.0,
        dt: 0.25,
        rho: f64::NEG_INFINITY,
        decrease: f64::INFINITY,
        accepted: false,
        phase: Phase::IllPosed,
        hessian_rebuilt: true,
        wall_time_ns: 42,
    };
    let text = serde_json::to_string(&record).unwrap();
    let back: IterationRecord = serde_json::from_str(&text).unwrap();
    assert!(back.same_numerics(&record));
    let legacy: IterationRecord = serde_json::from_str(&text.replace("\"NaN\"", "null")).unwrap();
    assert!(legacy.kkt.is_nan());
}

#[test]
fn start_point_is_restored_onto_the_constraints() {
    let p = problem("sphere", Some(10))
        .unwrap()
        .with_start(DVector::from_element(10, 50.0))
        .unwrap();
    let mut first = true;
    solve_with_observer(&p, &SolverConfig::default(), |e| {
        if first {
            assert!(p.constraints().infeasibility(e.x_prev) <= 1e-10);
            first = false;
        }
    })
    .unwrap();
}
