//! Browser bindings for the solver. Each exported function returns plain
//! data (JSON strings or flat `f64` arrays) so the page needs no glue beyond
//! what `wasm-bindgen` generates.

use nalgebra::DVector;
use rcmtr::problems::{self, catalog};
use rcmtr::{make_pair, solve_with_observer, Phase, SolverConfig};
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize)]
pub struct ProblemInfo {
    pub name: String,
    pub convex: bool,
    /// Constraint row `a·x = b`.
    pub a: [f64; 2],
    pub b: f64,
}

#[derive(Debug, Serialize)]
pub struct PathStep {
    pub k: usize,
    pub x: [f64; 2],
    pub f: f64,
    pub dt: f64,
    pub rho: f64,
    pub accepted: bool,
    pub ill_posed: bool,
}

#[derive(Debug, Serialize)]
pub struct SolvePath {
    pub status: String,
    pub start: [f64; 2],
    pub x_star: [f64; 2],
    pub f_star: f64,
    pub kkt: f64,
    pub iterations: usize,
    pub steps: Vec<PathStep>,
}

#[derive(Debug, Serialize)]
pub struct Ellipse {
    pub usable: bool,
    /// Boundary of `{v : vᵀ B v = 1}` sampled counter-clockwise.
    pub boundary: Vec<[f64; 2]>,
    pub eigenvalues: [f64; 2],
}

fn two_dimensional() -> Vec<rcmtr::problems::CatalogEntry> {
    catalog()
        .into_iter()
        .filter(|e| e.function().fixed_dim() == Some(2))
        .collect()
}

pub fn problem_list() -> Vec<ProblemInfo> {
    two_dimensional()
        .into_iter()
        .map(|e| {
            let p = e
                .instantiate(None)
                .expect("catalog entries build at their default size");
            let a = p.constraints().a();
            ProblemInfo {
                name: e.name.to_string(),
                convex: e.convexity == problems::Convexity::Convex,
                a: [a[(0, 0)], a[(0, 1)]],
                b: p.constraints().b()[0],
            }
        })
        .collect()
}

/// Solves a two-dimensional catalog problem from `start` and records every trial.
pub fn trace_solve(
    name: &str,
    start: [f64; 2],
    dt0: f64,
    sigma0: f64,
) -> Result<SolvePath, String> {
    let p = problems::problem(name, None)
        .and_then(|p| p.with_start(DVector::from_row_slice(&start)))
        .map_err(|e| e.to_string())?;
    if p.dim() != 2 {
        return Err(format!("{name} is not a two-dimensional problem"));
    }
    let config = SolverConfig {
        dt0,
        sigma0,
        ..SolverConfig::default()
    };
    let mut steps = Vec::new();
    let report = solve_with_observer(&p, &config, |e| {
        steps.push(PathStep {
            k: e.record.k,
            x: [e.state.x[0], e.state.x[1]],
            f: e.record.f,
            dt: e.record.dt,
            rho: e.record.rho,
            accepted: e.record.accepted,
            ill_posed: e.record.phase == Phase::IllPosed,
        });
    })
    .map_err(|e| e.to_string())?;
    Ok(SolvePath {
        status: report.status.as_str().to_string(),
        start,
        x_star: [report.x_star[0], report.x_star[1]],
        f_star: report.f_star,
        kkt: report.kkt,
        iterations: report.iterations,
        steps,
    })
}

/// Row-major `ny × nx` samples of the objective over a rectangle.
pub fn sample_grid(name: &str, bounds: [f64; 4], nx: usize, ny: usize) -> Result<Vec<f64>, String> {
    let p = problems::problem(name, None).map_err(|e| e.to_string())?;
    if p.dim() != 2 || nx < 2 || ny < 2 {
        return Err("need a two-dimensional problem and at least 2×2 samples".into());
    }
    let [x0, x1, y0, y1] = bounds;
    let mut out = Vec::with_capacity(nx * ny);
    let mut point = DVector::zeros(2);
    for j in 0..ny {
        point[1] = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            point[0] = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            out.push(p.value(&point));
        }
    }
    Ok(out)
}

/// Level set `vᵀBv = 1` of the memory-one preconditioner built from `(s, y)`.
pub fn preconditioner_ellipse(s: [f64; 2], y: [f64; 2], samples: usize) -> Ellipse {
    let pair = make_pair(
        DVector::from_row_slice(&s),
        DVector::from_row_slice(&y),
        1e-6,
    );
    let samples = samples.max(8);
    let boundary = (0..samples)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / samples as f64;
            let u = DVector::from_row_slice(&[t.cos(), t.sin()]);
            let r = 1.0 / u.dot(&pair.apply_forward(&u)).sqrt();
            [r * u[0], r * u[1]]
        })
        .collect();
    let e0 = pair.apply_forward(&DVector::from_row_slice(&[1.0, 0.0]));
    let e1 = pair.apply_forward(&DVector::from_row_slice(&[0.0, 1.0]));
    let (a, b, d) = (e0[0], 0.5 * (e0[1] + e1[0]), e1[1]);
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d).powi(2) + b * b).sqrt();
    Ellipse {
        usable: pair.is_usable(),
        boundary,
        eigenvalues: [mid - rad, mid + rad],
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

/// JSON list of the two-dimensional problems and their constraint lines.
#[wasm_bindgen(js_name = listProblems)]
pub fn list_problems() -> String {
    to_json(&problem_list())
}

/// JSON description of a solve, or an exception with the error message.
#[wasm_bindgen(js_name = solvePath)]
pub fn solve_path(name: &str, x: f64, y: f64, dt0: f64, sigma0: f64) -> Result<String, JsError> {
    trace_solve(name, [x, y], dt0, sigma0)
        .map(|r| to_json(&r))
        .map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = objectiveGrid)]
#[allow(clippy::too_many_arguments)]
pub fn objective_grid(
    name: &str,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
) -> Result<Vec<f64>, JsError> {
    sample_grid(name, [x_min, x_max, y_min, y_max], nx, ny).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = lbfgsEllipse)]
pub fn lbfgs_ellipse(sx: f64, sy: f64, yx: f64, yy: f64) -> String {
    to_json(&preconditioner_ellipse([sx, sy], [yx, yy], 128))
}
