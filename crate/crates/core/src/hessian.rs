//! Two-sided projected Hessian and the regularized system used once the
//! time step has become small.

use nalgebra::{DMatrix, DVector, Dyn, QR};

use crate::error::{Error, Result};
use crate::projection::ProjectorBasis;

/// Default forward-difference increment.
pub const DEFAULT_FD_EPS: f64 = 1e-6;

/// Relative pivot size below which the regularized matrix is called singular.
const SINGULAR_PIVOT: f64 = 1e-14;

/// Approximation of `P ∇²f(x) P`.
#[derive(Debug, Clone)]
pub struct ProjectedHessian {
    matrix: DMatrix<f64>,
    eval_iteration: usize,
    fd_eps: f64,
}

impl ProjectedHessian {
    /// Wraps an already projected matrix.
    pub fn from_matrix(matrix: DMatrix<f64>, eval_iteration: usize) -> Self {
        Self {
            matrix,
            eval_iteration,
            fd_eps: 0.0,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Iteration index at which the matrix was evaluated.
    pub fn eval_iteration(&self) -> usize {
        self.eval_iteration
    }

    /// Difference increment, zero for an analytic matrix.
    pub fn fd_eps(&self) -> f64 {
        self.fd_eps
    }
}

/// Column `i` is `(Pg(x + ε P eᵢ) − Pg(x)) / ε`.
///
/// Makes `n + 1` gradient calls, probing columns in ascending order.
pub fn fd_projected_hessian<G>(
    mut grad: G,
    basis: &ProjectorBasis,
    x: &DVector<f64>,
    fd_eps: f64,
    eval_iteration: usize,
) -> Result<ProjectedHessian>
where
    G: FnMut(&DVector<f64>) -> DVector<f64>,
{
    assert!(fd_eps > 0.0, "fd_eps must be positive");
    let n = x.len();
    let g0 = grad(x);
    if g0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteGradient);
    }
    let pg0 = basis.project_gradient(&g0);
    let directions = basis.project_columns(&DMatrix::identity(n, n));
    let mut grads = DMatrix::zeros(n, n);
    for i in 0..n {
        let probe = x + fd_eps * directions.column(i);
        let g = grad(&probe);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteGradient);
        }
        grads.set_column(i, &g);
    }
    let mut matrix = basis.project_columns(&grads);
    for mut column in matrix.column_iter_mut() {
        column -= &pg0;
        column /= fd_eps;
    }
    Ok(ProjectedHessian {
        matrix,
        eval_iteration,
        fd_eps,
    })
}

/// `P H P` for an analytic Hessian `H`.
pub fn exact_projected_hessian(
    basis: &ProjectorBasis,
    hessian: &DMatrix<f64>,
    eval_iteration: usize,
) -> ProjectedHessian {
    let ph = basis.project_columns(hessian);
    let php = basis.project_columns(&ph.transpose()).transpose();
    ProjectedHessian::from_matrix(php, eval_iteration)
}

/// QR factorization of `(σ₀/Δt) I + H`.
#[derive(Debug, Clone)]
pub struct RegularizedFactor {
    qr: QR<f64, Dyn, Dyn>,
    dt_used: f64,
    stale: bool,
}

impl RegularizedFactor {
    /// The time step baked into the factorization.
    pub fn dt_used(&self) -> f64 {
        self.dt_used
    }

    /// Set when the factor was carried over from an earlier iteration.
    pub fn is_stale(&self) -> bool {
        self.stale
    }

    pub fn mark_stale(&mut self) {
        self.stale = true;
    }

    /// Solves `B d = rhs`.
    pub fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        self.qr.solve(rhs).ok_or(Error::SingularFactor)
    }
}

pub fn build_and_factor(
    hessian: &ProjectedHessian,
    sigma0: f64,
    dt: f64,
) -> Result<RegularizedFactor> {
    assert!(sigma0 > 0.0 && dt > 0.0, "sigma0 and dt must be positive");
    let n = hessian.matrix.nrows();
    let mut b = hessian.matrix.clone();
    let shift = sigma0 / dt;
    for i in 0..n {
        b[(i, i)] += shift;
    }
    let scale = b.norm();
    if !scale.is_finite() {
        return Err(Error::SingularFactor);
    }
    let qr = b.qr();
    let r = qr.r();
    if r.diagonal()
        .iter()
        .any(|d| !(d.abs() > SINGULAR_PIVOT * scale))
    {
        return Err(Error::SingularFactor);
    }
    Ok(RegularizedFactor {
        qr,
        dt_used: dt,
        stale: false,
    })
}
