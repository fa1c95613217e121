//! Projected steepest descent with Armijo backtracking, used as a reference
//! method in benchmarks.

use nalgebra::DVector;

use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::problems::ProblemInstance;
use crate::projection::factor;
use crate::solver::{IterationRecord, Phase, SolverConfig, SolverReport, Status};

const ARMIJO_C: f64 = 1e-4;
const MAX_HALVINGS: usize = 60;

/// Runs `x ← x − α Pg` with `α` halved from 1 until
/// `f(x + αd) ≤ f(x) + c·α·gᵀd`. Uses the same tolerance and iteration cap
/// as the continuation solver.
pub fn projected_gradient(
    problem: &ProblemInstance,
    config: &SolverConfig,
) -> Result<SolverReport> {
    config.validate()?;
    let clock = Stopwatch::start();
    let cs = problem.constraints();
    let basis = factor(cs, config.rank_tol)?;

    let mut x = basis.restore_feasibility(problem.start());
    let mut f = problem.value(&x);
    if !f.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut g = problem.gradient(&x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteGradient);
    }
    let mut pg = basis.project_gradient(&g);
    let mut objective_evals = 1;
    let mut gradient_evals = 1;
    let mut trace = Vec::new();
    let mut k = 0;

    let status = if basis.is_point() {
        Status::SingleFeasiblePoint
    } else {
        loop {
            if pg.amax() <= config.tol {
                break if cs.infeasibility(&x) <= config.tol {
                    Status::Converged
                } else {
                    Status::InfeasibleStationary
                };
            }
            if k >= config.max_iter {
                break Status::MaxIterations;
            }
            k += 1;

            let d: DVector<f64> = -&pg;
            let slope = g.dot(&d);
            let mut alpha = 1.0;
            let mut found = None;
            for _ in 0..MAX_HALVINGS {
                let trial = &x + alpha * &d;
                let f_trial = problem.value(&trial);
                objective_evals += 1;
                if f_trial <= f + ARMIJO_C * alpha * slope {
                    found = Some((trial, f_trial));
                    break;
                }
                alpha *= 0.5;
            }
            let Some((x_new, f_new)) = found else {
                break Status::StepFailure;
            };
            let g_new = problem.gradient(&x_new);
            gradient_evals += 1;
            if g_new.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient);
            }
            let decrease = f - f_new;
            x = x_new;
            f = f_new;
            pg = basis.project_gradient(&g_new);
            g = g_new;
            trace.push(IterationRecord {
                k,
                f,
                kkt: pg.amax(),
                feas: cs.infeasibility(&x),
                dt: alpha,
                rho: 1.0,
                decrease,
                accepted: true,
                phase: Phase::WellPosed,
                hessian_rebuilt: false,
                wall_time_ns: clock.elapsed().as_nanos() as u64,
            });
        }
    };

    let residuals = basis.residuals(cs, &x, &g);
    Ok(SolverReport {
        status,
        x_star: x,
        f_star: f,
        kkt: residuals.kkt,
        feas: residuals.feas,
        iterations: k,
        accepted_steps: trace.len(),
        objective_evals,
        gradient_evals,
        hessian_evals: 0,
        wall_time: clock.elapsed(),
        trace,
    })
}
