//! Regularization continuation with trust-region time-step control.
//!
//! Each iteration takes the continuation step `s = Δt/(1+Δt)·d`, where `d`
//! solves a preconditioned projected-gradient system:
//!
//! * while `Δt ≥ illposed_switch`, `d = −B⁻¹ Pg` with the memory-one L-BFGS
//!   matrix `B`;
//! * once `Δt` drops below the switch, permanently, `d` solves
//!   `((σ₀/Δt) I + P∇²fP) d = −Pg` with a cached QR factorization.
//!
//! The step is judged by the ratio of actual to model decrease, with the
//! linear model `m(0) − m(s) = −(1 + Δt/2)/(1 + Δt) · gᵀs`, and `Δt` grows,
//! stays or shrinks depending on how close that ratio is to one. Every step
//! lies in `null(A)`, so feasibility of the restored start is preserved
//! without correction steps.

use std::time::Duration;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::clock::Stopwatch;
use crate::error::{Error, Result};
use crate::hessian::{
    build_and_factor, exact_projected_hessian, fd_projected_hessian, ProjectedHessian,
    RegularizedFactor, DEFAULT_FD_EPS,
};
use crate::lbfgs::{make_pair, LbfgsPair};
use crate::problems::ProblemInstance;
use crate::projection::{factor, ProjectorBasis, DEFAULT_RANK_TOL};

/// How the projected Hessian of the ill-posed phase is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HessianMode {
    /// Forward differences of the projected gradient.
    #[default]
    FiniteDifference,
    /// The objective's analytic Hessian when it has one, differences otherwise.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Stopping tolerance on `‖Pg‖∞` (and on `‖Ax − b‖∞` for convergence).
    pub tol: f64,
    pub max_iter: usize,
    pub sigma0: f64,
    pub dt0: f64,
    /// Minimum ratio for accepting a trial step.
    pub eta_a: f64,
    /// Sufficient-decrease constant of the model.
    pub eta_m: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    /// Curvature guard of the L-BFGS pair.
    pub theta: f64,
    /// Time step below which the solver switches to the regularized Hessian.
    pub illposed_switch: f64,
    pub fd_eps: f64,
    pub rank_tol: f64,
    /// Time step below which the run is abandoned.
    pub dt_min: f64,
    pub hessian_mode: HessianMode,
    /// When the model decrease is within a few thousand ulps of `f`, measure
    /// the actual decrease as `−½(g + g₊)ᵀs` instead of `f − f₊`.
    #[serde(default = "enabled")]
    pub rounding_guard: bool,
}

fn enabled() -> bool {
    true
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 300,
            sigma0: 1e-4,
            dt0: 1e-2,
            eta_a: 1e-6,
            eta_m: 1e-10,
            eta1: 0.25,
            eta2: 0.75,
            gamma1: 2.0,
            gamma2: 0.5,
            theta: 1e-6,
            illposed_switch: 1e-3,
            fd_eps: DEFAULT_FD_EPS,
            rank_tol: DEFAULT_RANK_TOL,
            dt_min: 1e-16,
            hessian_mode: HessianMode::default(),
            rounding_guard: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol", self.tol),
            ("sigma0", self.sigma0),
            ("dt0", self.dt0),
            ("eta_a", self.eta_a),
            ("eta_m", self.eta_m),
            ("theta", self.theta),
            ("illposed_switch", self.illposed_switch),
            ("fd_eps", self.fd_eps),
            ("dt_min", self.dt_min),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if !(self.rank_tol >= 0.0) {
            return Err(Error::InvalidConfig("rank_tol must be nonnegative".into()));
        }
        if !(0.0 < self.eta1 && self.eta1 < self.eta2) {
            return Err(Error::InvalidConfig("need 0 < eta1 < eta2".into()));
        }
        if !(self.gamma1 > 1.0 && 1.0 > self.gamma2 && self.gamma2 > 0.0) {
            return Err(Error::InvalidConfig("need gamma1 > 1 > gamma2 > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    WellPosed,
    IllPosed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Converged,
    MaxIterations,
    /// The time step fell below `dt_min`.
    StepFailure,
    /// `A` is square and nonsingular; the only feasible point is returned.
    SingleFeasiblePoint,
    /// `‖Pg‖∞ ≤ tol` was reached at a point violating `‖Ax − b‖∞ ≤ tol`.
    InfeasibleStationary,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "Converged",
            Status::MaxIterations => "MaxIterations",
            Status::StepFailure => "StepFailure",
            Status::SingleFeasiblePoint => "SingleFeasiblePoint",
            Status::InfeasibleStationary => "InfeasibleStationary",
        }
    }
}

/// One outer iteration. `f`, `kkt` and `feas` describe the iterate after the
/// accept/reject decision; `dt` is the step used for the trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    #[serde(with = "crate::serde_float")]
    pub f: f64,
    #[serde(with = "crate::serde_float")]
    pub kkt: f64,
    #[serde(with = "crate::serde_float")]
    pub feas: f64,
    pub dt: f64,
    #[serde(with = "crate::serde_float")]
    pub rho: f64,
    #[serde(with = "crate::serde_float")]
    pub decrease: f64,
    pub accepted: bool,
    pub phase: Phase,
    pub hessian_rebuilt: bool,
    pub wall_time_ns: u64,
}

impl IterationRecord {
    /// Equality of everything except the wall-clock stamp.
    pub fn same_numerics(&self, other: &Self) -> bool {
        self.k == other.k
            && self.f.to_bits() == other.f.to_bits()
            && self.kkt.to_bits() == other.kkt.to_bits()
            && self.feas.to_bits() == other.feas.to_bits()
            && self.dt.to_bits() == other.dt.to_bits()
            && self.rho.to_bits() == other.rho.to_bits()
            && self.decrease.to_bits() == other.decrease.to_bits()
            && self.accepted == other.accepted
            && self.phase == other.phase
            && self.hessian_rebuilt == other.hessian_rebuilt
    }
}

#[derive(Debug, Clone)]
pub struct SolverReport {
    pub status: Status,
    pub x_star: DVector<f64>,
    pub f_star: f64,
    pub kkt: f64,
    pub feas: f64,
    pub iterations: usize,
    pub accepted_steps: usize,
    pub objective_evals: usize,
    pub gradient_evals: usize,
    pub hessian_evals: usize,
    pub wall_time: Duration,
    pub trace: Vec<IterationRecord>,
}

/// The evolving iterate.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub k: usize,
    pub x: DVector<f64>,
    pub f: f64,
    pub g: DVector<f64>,
    pub pg: DVector<f64>,
    pub dt: f64,
    pub phase: Phase,
    pub last_step_accepted: bool,
    pub pair: LbfgsPair,
    pub d: DVector<f64>,
    pub hessian: Option<ProjectedHessian>,
    pub factor: Option<RegularizedFactor>,
    pub rho_prev: f64,
}

/// Everything about one trial step, handed to an observer.
#[derive(Debug)]
pub struct StepEvent<'a> {
    /// State after the accept/reject decision and the time-step update.
    pub state: &'a SolverState,
    /// Iterate the trial started from.
    pub x_prev: &'a DVector<f64>,
    /// Projected gradient at `x_prev`.
    pub pg_prev: &'a DVector<f64>,
    pub direction: &'a DVector<f64>,
    pub step: &'a DVector<f64>,
    pub dt_trial: f64,
    pub f_trial: f64,
    pub record: &'a IterationRecord,
}

/// Model decrease below which `f − f₊` is dominated by rounding, in ulps of `f`.
const ROUNDING_ULPS: f64 = 1e3;

/// `m(0) − m(s)` of the linear continuation model.
pub fn model_decrease(g: &DVector<f64>, s: &DVector<f64>, dt: f64) -> f64 {
    -((1.0 + 0.5 * dt) / (1.0 + dt)) * g.dot(s)
}

/// `(ρ, m(0) − m(s))`. A non-positive model decrease yields `ρ = −∞`.
pub fn trial_ratio(
    f_k: f64,
    f_trial: f64,
    g: &DVector<f64>,
    s: &DVector<f64>,
    dt: f64,
) -> (f64, f64) {
    let decrease = model_decrease(g, s, dt);
    if !(decrease > 0.0) {
        return (f64::NEG_INFINITY, decrease);
    }
    ((f_k - f_trial) / decrease, decrease)
}

pub fn update_timestep(dt: f64, rho: f64, config: &SolverConfig) -> f64 {
    let dev = (1.0 - rho).abs();
    if dev <= config.eta1 {
        config.gamma1 * dt
    } else if dev > config.eta1 && dev < config.eta2 {
        dt
    } else {
        config.gamma2 * dt
    }
}

pub fn solve(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolverReport> {
    solve_with_observer(problem, config, |_| {})
}

#[derive(Default)]
struct Counters {
    objective: usize,
    gradient: usize,
    hessian: usize,
    accepted: usize,
}

pub fn solve_with_observer<F>(
    problem: &ProblemInstance,
    config: &SolverConfig,
    mut observer: F,
) -> Result<SolverReport>
where
    F: FnMut(&StepEvent<'_>),
{
    config.validate()?;
    let clock = Stopwatch::start();
    let cs = problem.constraints();
    let n = problem.dim();
    let basis = factor(cs, config.rank_tol)?;
    let mut counters = Counters::default();

    let x = basis.restore_feasibility(problem.start());
    let f = problem.value(&x);
    counters.objective += 1;
    if !f.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let g = problem.gradient(&x);
    counters.gradient += 1;
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteGradient);
    }
    let pg = basis.project_gradient(&g);

    let mut state = SolverState {
        k: 0,
        x,
        f,
        g,
        pg,
        dt: config.dt0,
        phase: Phase::WellPosed,
        last_step_accepted: true,
        pair: LbfgsPair::zero(n),
        d: DVector::zeros(n),
        hessian: None,
        factor: None,
        rho_prev: 0.0,
    };

    if basis.is_point() {
        return Ok(finish(
            Status::SingleFeasiblePoint,
            state,
            &basis,
            problem,
            counters,
            clock,
            Vec::new(),
        ));
    }

    let mut trace = Vec::new();
    let status = loop {
        if state.pg.amax() <= config.tol {
            break if cs.infeasibility(&state.x) <= config.tol {
                Status::Converged
            } else {
                Status::InfeasibleStationary
            };
        }
        if state.k >= config.max_iter {
            break Status::MaxIterations;
        }

        if state.dt < config.illposed_switch {
            state.phase = Phase::IllPosed;
        }
        let mut hessian_rebuilt = false;
        match state.phase {
            Phase::WellPosed => {
                if state.last_step_accepted {
                    state.d = -basis.project_gradient(&state.pair.apply_inverse(&state.pg));
                }
            }
            Phase::IllPosed => {
                hessian_rebuilt =
                    ill_posed_direction(&mut state, problem, &basis, config, &mut counters)?;
            }
        }

        let dt_trial = state.dt;
        let step = (dt_trial / (1.0 + dt_trial)) * &state.d;
        let x_trial = &state.x + &step;
        let f_trial = problem.value(&x_trial);
        counters.objective += 1;
        let (mut rho, decrease) = trial_ratio(state.f, f_trial, &state.g, &step, dt_trial);
        let mut g_trial = None;
        if config.rounding_guard
            && decrease > 0.0
            && decrease <= ROUNDING_ULPS * f64::EPSILON * state.f.abs().max(1.0)
        {
            let g = problem.gradient(&x_trial);
            counters.gradient += 1;
            rho = if g.iter().all(|v| v.is_finite()) {
                -0.5 * (&state.g + &g).dot(&step) / decrease
            } else {
                f64::NEG_INFINITY
            };
            g_trial = Some(g);
        }
        let accepted =
            rho >= config.eta_a && decrease >= config.eta_m * step.norm() * state.pg.norm();

        let x_prev = state.x.clone();
        let pg_prev = state.pg.clone();
        if accepted {
            let g_new = match g_trial {
                Some(g) => g,
                None => {
                    counters.gradient += 1;
                    problem.gradient(&x_trial)
                }
            };
            if g_new.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteGradient);
            }
            let pg_new = basis.project_gradient(&g_new);
            let y = &pg_new - &state.pg;
            state.pair = make_pair(step.clone(), y, config.theta);
            state.x = x_trial;
            state.f = f_trial;
            state.g = g_new;
            state.pg = pg_new;
            counters.accepted += 1;
        }
        state.last_step_accepted = accepted;
        state.rho_prev = rho;
        state.dt = update_timestep(dt_trial, rho, config);
        state.k += 1;

        let record = IterationRecord {
            k: state.k,
            f: state.f,
            kkt: state.pg.amax(),
            feas: cs.infeasibility(&state.x),
            dt: dt_trial,
            rho,
            decrease,
            accepted,
            phase: state.phase,
            hessian_rebuilt,
            wall_time_ns: clock.elapsed().as_nanos() as u64,
        };
        observer(&StepEvent {
            state: &state,
            x_prev: &x_prev,
            pg_prev: &pg_prev,
            direction: &state.d,
            step: &step,
            dt_trial,
            f_trial,
            record: &record,
        });
        trace.push(record);

        if state.dt < config.dt_min {
            break Status::StepFailure;
        }
    };

    Ok(finish(
        status, state, &basis, problem, counters, clock, trace,
    ))
}

/// Computes the regularized direction, refreshing `H` and the factorization
/// as the cache policy requires. Returns whether `H` was re-evaluated.
fn ill_posed_direction(
    state: &mut SolverState,
    problem: &ProblemInstance,
    basis: &ProjectorBasis,
    config: &SolverConfig,
    counters: &mut Counters,
) -> Result<bool> {
    let mut rebuilt = false;
    let refactor_only = !state.last_step_accepted && state.hessian.is_some();
    let reuse = state.last_step_accepted
        && state.hessian.is_some()
        && state.factor.is_some()
        && (state.rho_prev - 1.0).abs() <= config.eta1;

    let built = if reuse {
        if let Some(f) = state.factor.as_mut() {
            f.mark_stale();
        }
        Ok(())
    } else {
        if !refactor_only {
            state.hessian = Some(evaluate_hessian(state, problem, basis, config, counters)?);
            rebuilt = true;
        }
        let hessian = state.hessian.as_ref().expect("hessian evaluated above");
        build_and_factor(hessian, config.sigma0, state.dt).map(|f| state.factor = Some(f))
    };

    match built {
        Ok(()) => {}
        Err(Error::SingularFactor) => {
            // one retry with a smaller time step, which strengthens the shift
            state.dt *= config.gamma2;
            let hessian = state.hessian.as_ref().expect("hessian evaluated above");
            state.factor = Some(build_and_factor(hessian, config.sigma0, state.dt)?);
        }
        Err(e) => return Err(e),
    }

    let factor = state.factor.as_ref().expect("factor built above");
    // B is only σ₀/Δt on range(Aᵀ), so rounding there is amplified
    state.d = basis.project_gradient(&factor.solve(&(-&state.pg))?);
    Ok(rebuilt)
}

fn evaluate_hessian(
    state: &SolverState,
    problem: &ProblemInstance,
    basis: &ProjectorBasis,
    config: &SolverConfig,
    counters: &mut Counters,
) -> Result<ProjectedHessian> {
    counters.hessian += 1;
    if config.hessian_mode == HessianMode::Analytic {
        if let Some(h) = problem.objective().hessian(&state.x) {
            return Ok(exact_projected_hessian(basis, &h, state.k));
        }
    }
    counters.gradient += problem.dim() + 1;
    fd_projected_hessian(
        |x| problem.gradient(x),
        basis,
        &state.x,
        config.fd_eps,
        state.k,
    )
}

fn finish(
    status: Status,
    state: SolverState,
    basis: &ProjectorBasis,
    problem: &ProblemInstance,
    counters: Counters,
    clock: Stopwatch,
    trace: Vec<IterationRecord>,
) -> SolverReport {
    let residuals = basis.residuals(problem.constraints(), &state.x, &state.g);
    SolverReport {
        status,
        x_star: state.x,
        f_star: state.f,
        kkt: residuals.kkt,
        feas: residuals.feas,
        iterations: state.k,
        accepted_steps: counters.accepted,
        objective_evals: counters.objective,
        gradient_evals: counters.gradient,
        hessian_evals: counters.hessian,
        wall_time: clock.elapsed(),
        trace,
    }
}
