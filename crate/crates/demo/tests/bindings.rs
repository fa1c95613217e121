use rcmtr_demo::{
    list_problems, preconditioner_ellipse, problem_list, sample_grid, solve_path, trace_solve,
};

#[test]
fn lists_the_two_dimensional_problems() {
    let names: Vec<_> = problem_list().into_iter().map(|p| p.name).collect();
    for expected in [
        "booth",
        "matyas",
        "three_hump_camel",
        "six_hump_camel",
        "beale",
    ] {
        assert!(
            names.iter().any(|n| n == expected),
            "{expected} missing from {names:?}"
        );
    }
    let json: serde_json::Value = serde_json::from_str(&list_problems()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), names.len());
}

#[test]
fn booth_path_ends_at_the_constrained_minimum() {
    let path = trace_solve("booth", [3.0, -2.0], 1e-2, 1.0).unwrap();
    assert_eq!(path.status, "Converged");
    assert!((path.x_star[0] + 1.0).abs() < 1e-5 && (path.x_star[1] - 4.0).abs() < 1e-5);
    assert_eq!(path.steps.len(), path.iterations);
    for step in &path.steps {
        assert!((2.0 * step.x[0] + step.x[1] - 2.0).abs() < 1e-10);
    }
    let json: serde_json::Value =
        serde_json::from_str(&solve_path("booth", 3.0, -2.0, 1e-2, 1.0).unwrap()).unwrap();
    assert_eq!(json["status"], "Converged");
}

#[test]
fn bad_requests_are_errors() {
    assert!(trace_solve("sphere", [0.0, 0.0], 1e-2, 1.0).is_err());
    assert!(trace_solve("nosuch", [0.0, 0.0], 1e-2, 1.0).is_err());
    assert!(trace_solve("booth", [0.0, 0.0], -1.0, 1.0).is_err());
    assert!(sample_grid("booth", [0.0, 1.0, 0.0, 1.0], 1, 5).is_err());
}

#[test]
fn grid_is_row_major() {
    let grid = sample_grid("booth", [-1.0, 1.0, 0.0, 4.0], 3, 2).unwrap();
    let booth = |x: f64, y: f64| (x + 2.0 * y - 7.0).powi(2) + (2.0 * x + y - 5.0).powi(2);
    let expected = [
        booth(-1.0, 0.0),
        booth(0.0, 0.0),
        booth(1.0, 0.0),
        booth(-1.0, 4.0),
        booth(0.0, 4.0),
        booth(1.0, 4.0),
    ];
    for (g, e) in grid.iter().zip(expected) {
        assert!((g - e).abs() < 1e-12);
    }
}

#[test]
fn ellipse_matches_the_preconditioner_spectrum() {
    let e = preconditioner_ellipse([1.0, 0.0], [1.0, 1.0], 64);
    assert!(e.usable);
    // trace 2, determinant cos²(45°)
    let [lo, hi] = e.eigenvalues;
    assert!((lo + hi - 2.0).abs() < 1e-12);
    assert!((lo * hi - 0.5).abs() < 1e-12);
    let radii: Vec<f64> = e.boundary.iter().map(|p| p[0].hypot(p[1])).collect();
    let max = radii.iter().cloned().fold(0.0, f64::max);
    assert!((max - 1.0 / lo.sqrt()).abs() < 1e-2);

    let identity = preconditioner_ellipse([1.0, 0.0], [0.0, 1.0], 16);
    assert!(!identity.usable);
    assert!(identity
        .boundary
        .iter()
        .all(|p| (p[0].hypot(p[1]) - 1.0).abs() < 1e-12));
}
