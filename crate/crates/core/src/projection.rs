//! Orthogonal projection onto the null space of a linear equality constraint.
//!
//! The constraint matrix is factored once with a column-pivoted Householder QR
//! of `Aᵀ`. The leading `r` columns of the orthogonal factor span `range(Aᵀ)`,
//! the remaining `n − r` span `null(A)`, and every projection afterwards is a
//! pair of thin matrix-vector products.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default relative threshold on `|R(i,i)| / |R(0,0)|` used for rank detection.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Relative residual above which a rank-deficient system is called inconsistent.
const CONSISTENCY_TOL: f64 = 1e-8;

/// The affine feasible set `{x : A x = b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintSystem {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

impl ConstraintSystem {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        let (m, n) = a.shape();
        if m == 0 || n == 0 {
            return Err(Error::InvalidConstraints(format!("empty matrix {m}x{n}")));
        }
        if m > n {
            return Err(Error::InvalidConstraints(format!(
                "more rows than columns ({m} > {n})"
            )));
        }
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidConstraints("non-finite entry".into()));
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// Number of constraints `m`.
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    /// Number of variables `n`.
    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    /// `‖A x − b‖∞`.
    pub fn infeasibility(&self, x: &DVector<f64>) -> f64 {
        (&self.a * x - &self.b).amax()
    }
}

/// Orthonormal bases of `range(Aᵀ)` and `null(A)` plus the reduced
/// right-hand side, so that `Ax = b` is equivalent to `Q1ᵀx = b_r`.
#[derive(Debug, Clone)]
pub struct ProjectorBasis {
    rank: usize,
    q1: DMatrix<f64>,
    q2: DMatrix<f64>,
    r1: DMatrix<f64>,
    perm: Vec<usize>,
    b_r: DVector<f64>,
}

/// Optimality and feasibility measures at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    /// `‖P g‖∞`, equal to `‖∇f + Aᵀλ‖∞` for the least-squares multiplier.
    pub kkt: f64,
    /// `‖A x − b‖∞`.
    pub feas: f64,
}

/// Factor `Aᵀ E = Q R` with column pivoting and split `Q` at the detected rank.
pub fn factor(cs: &ConstraintSystem, rank_tol: f64) -> Result<ProjectorBasis> {
    if !(rank_tol >= 0.0) {
        return Err(Error::InvalidConfig(format!("rank_tol = {rank_tol}")));
    }
    let n = cs.cols();
    let m = cs.rows();
    let mut w = cs.a.transpose();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut reflectors: Vec<(DVector<f64>, f64)> = Vec::with_capacity(m);
    let mut r00 = 0.0;
    let mut rank = 0;

    for k in 0..m {
        // pivot on the largest remaining column norm
        let (pivot, norm_sq) = (k..m)
            .map(|j| (j, w.view((k, j), (n - k, 1)).norm_squared()))
            .fold(
                (k, -1.0),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        let norm = norm_sq.sqrt();
        if k == 0 {
            r00 = norm;
            if r00 == 0.0 {
                return Err(Error::RankZero);
            }
        }
        if !(norm > rank_tol * r00) {
            break;
        }
        if pivot != k {
            w.swap_columns(k, pivot);
            perm.swap(k, pivot);
        }

        let mut v: DVector<f64> = w.view((k, k), (n - k, 1)).column(0).into_owned();
        let alpha = if v[0] >= 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vtv = v.norm_squared();
        let beta = if vtv > 0.0 { 2.0 / vtv } else { 0.0 };

        w[(k, k)] = alpha;
        for i in k + 1..n {
            w[(i, k)] = 0.0;
        }
        for j in k + 1..m {
            let mut col = w.column_mut(j);
            let mut tail = col.rows_mut(k, n - k);
            let scale = beta * v.dot(&tail);
            tail.axpy(-scale, &v, 1.0);
        }
        reflectors.push((v, beta));
        rank = k + 1;
    }

    if rank == 0 {
        return Err(Error::RankZero);
    }

    // Q = H_0 H_1 ... H_{r-1}, accumulated backwards so each reflector only
    // touches the trailing block.
    let mut q = DMatrix::<f64>::identity(n, n);
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta == 0.0 {
            continue;
        }
        for j in k..n {
            let mut col = q.column_mut(j);
            let mut tail = col.rows_mut(k, n - k);
            let scale = beta * v.dot(&tail);
            tail.axpy(-scale, v, 1.0);
        }
    }

    let q1 = q.columns(0, rank).into_owned();
    let q2 = q.columns(rank, n - rank).into_owned();
    let r1 = w.rows(0, rank).into_owned();

    // b_r = argmin ‖R1ᵀ z − Eᵀ b‖, the normal equations (R1 R1ᵀ) z = R1 Eᵀ b
    // solved through a QR of R1ᵀ to avoid squaring the condition number.
    let eb = DVector::from_iterator(m, perm.iter().map(|&i| cs.b[i]));
    let b_r = reduced_rhs(&r1, &eb)?;

    let basis = ProjectorBasis {
        rank,
        q1,
        q2,
        r1,
        perm,
        b_r,
    };

    if rank < m {
        let x = basis.min_norm_point();
        let residual = cs.infeasibility(&x);
        let scale = 1.0f64
            .max(cs.b.amax())
            .max(max_abs_row_sum(&cs.a) * x.amax());
        if residual > CONSISTENCY_TOL * scale {
            return Err(Error::InconsistentConstraints { residual });
        }
    }
    Ok(basis)
}

fn reduced_rhs(r1: &DMatrix<f64>, eb: &DVector<f64>) -> Result<DVector<f64>> {
    let qr = r1.transpose().qr();
    let mut rhs = eb.clone();
    qr.q_tr_mul(&mut rhs);
    let r = qr.r();
    let rank = r.nrows();
    let top = rhs.rows(0, rank).into_owned();
    r.solve_upper_triangular(&top).ok_or(Error::RankZero)
}

fn max_abs_row_sum(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl ProjectorBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.q1.nrows()
    }

    /// Orthonormal basis of `range(Aᵀ)`, `n × r`.
    pub fn q1(&self) -> &DMatrix<f64> {
        &self.q1
    }

    /// Orthonormal basis of `null(A)`, `n × (n − r)`.
    pub fn q2(&self) -> &DMatrix<f64> {
        &self.q2
    }

    /// Upper-trapezoidal factor, `r × m`.
    pub fn r1(&self) -> &DMatrix<f64> {
        &self.r1
    }

    /// Column permutation: column `i` of `Aᵀ E` is row `perm[i]` of `A`.
    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn reduced_rhs(&self) -> &DVector<f64> {
        &self.b_r
    }

    /// True when the feasible set is a single point (`rank = n`).
    pub fn is_point(&self) -> bool {
        self.rank == self.dim()
    }

    /// `P g` without ever forming `P`.
    pub fn project_gradient(&self, g: &DVector<f64>) -> DVector<f64> {
        assert_eq!(g.len(), self.dim(), "vector length must equal n");
        if 2 * self.rank <= self.dim() {
            g - &self.q1 * self.q1.tr_mul(g)
        } else {
            &self.q2 * self.q2.tr_mul(g)
        }
    }

    /// Applies `P` to every column of `m`.
    pub fn project_columns(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        assert_eq!(m.nrows(), self.dim(), "matrix rows must equal n");
        if 2 * self.rank <= self.dim() {
            m - &self.q1 * self.q1.tr_mul(m)
        } else {
            &self.q2 * self.q2.tr_mul(m)
        }
    }

    /// Euclidean-nearest point of the feasible set to `x0`.
    pub fn restore_feasibility(&self, x0: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x0.len(), self.dim(), "vector length must equal n");
        let shift = self.q1.tr_mul(x0) - &self.b_r;
        x0 - &self.q1 * shift
    }

    /// Minimum-norm feasible point `Q1 b_r`.
    pub fn min_norm_point(&self) -> DVector<f64> {
        &self.q1 * &self.b_r
    }

    pub fn residuals(
        &self,
        cs: &ConstraintSystem,
        x: &DVector<f64>,
        g: &DVector<f64>,
    ) -> Residuals {
        Residuals {
            kkt: self.project_gradient(g).amax(),
            feas: cs.infeasibility(x),
        }
    }
}
