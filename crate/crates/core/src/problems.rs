//! Benchmark problems: standard smooth test objectives placed on the affine
//! subspace produced by [`build_constraints`].

use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::projection::ConstraintSystem;

/// Seed for the constant offset of the quartic-with-noise objective.
const QUARTIC_NOISE_SEED: u64 = 0x5eed_0f4a7;

/// An objective with an analytic gradient. Implementations must be pure.
pub trait Objective: Send + Sync {
    fn value(&self, x: &DVector<f64>) -> f64;

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;

    fn hessian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }

    /// `(Q, c, k)` with `f(x) = ½ xᵀQx + cᵀx + k`, when the objective is quadratic.
    fn quadratic(&self, _n: usize) -> Option<Quadratic> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    pub q: DMatrix<f64>,
    pub c: DVector<f64>,
    pub constant: f64,
}

impl Quadratic {
    pub fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.q * x)) + self.c.dot(x) + self.constant
    }
}

/// Row pattern of the constant block `A₂` in the benchmark constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowPattern {
    /// Rows alternate 1, 2, 1, 2, ...
    #[default]
    Alternating,
    /// Rows repeat 1, 2, 1, 1, 2, 1, ...
    Period3,
}

impl RowPattern {
    fn weight(self, row: usize) -> f64 {
        match self {
            RowPattern::Alternating => {
                if row % 2 == 1 {
                    2.0
                } else {
                    1.0
                }
            }
            RowPattern::Period3 => {
                if row % 3 == 1 {
                    2.0
                } else {
                    1.0
                }
            }
        }
    }
}

/// How many constraint rows a problem uses relative to `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowCount {
    Half,
    Third,
    TwoThirds,
    Exact(usize),
}

impl RowCount {
    pub fn rows(self, n: usize) -> Result<usize> {
        let m = match self {
            RowCount::Half if n.is_multiple_of(2) => n / 2,
            RowCount::Third if n.is_multiple_of(3) => n / 3,
            RowCount::TwoThirds if n.is_multiple_of(3) => 2 * n / 3,
            RowCount::Exact(m) => m,
            _ => {
                return Err(Error::DimensionError(format!(
                    "n = {n} is not divisible as required by {self:?}"
                )))
            }
        };
        if m == 0 || m > n {
            return Err(Error::DimensionError(format!("{m} rows for n = {n}")));
        }
        Ok(m)
    }
}

/// `A = [A₁ | A₂]`, `A₁` tridiagonal (2 on the diagonal, 1 off it), `A₂`
/// with constant rows, and `b = 2·ones(m)`, using `m = n/2`.
pub fn build_constraints(n: usize) -> Result<ConstraintSystem> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::DimensionError(format!(
            "benchmark constraints need an even n >= 2, got {n}"
        )));
    }
    build_constraints_with(n, n / 2, RowPattern::default())
}

pub fn build_constraints_with(n: usize, m: usize, pattern: RowPattern) -> Result<ConstraintSystem> {
    if m == 0 || m > n {
        return Err(Error::DimensionError(format!("{m} rows for n = {n}")));
    }
    let a = DMatrix::from_fn(m, n, |i, j| {
        if j < m {
            match i.abs_diff(j) {
                0 => 2.0,
                1 => 1.0,
                _ => 0.0,
            }
        } else {
            pattern.weight(i)
        }
    });
    ConstraintSystem::new(a, DVector::from_element(m, 2.0))
}

/// Equality-constrained quadratic minimum via the dense KKT system
/// `[Q Aᵀ; A 0] [x; λ] = [−c; b]`.
pub fn quadratic_oracle(cs: &ConstraintSystem, quad: &Quadratic) -> Result<(DVector<f64>, f64)> {
    let n = cs.cols();
    let m = cs.rows();
    if quad.q.shape() != (n, n) || quad.c.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: quad.c.len(),
        });
    }
    let mut kkt = DMatrix::zeros(n + m, n + m);
    kkt.view_mut((0, 0), (n, n)).copy_from(&quad.q);
    kkt.view_mut((0, n), (n, m)).copy_from(&cs.a().transpose());
    kkt.view_mut((n, 0), (m, n)).copy_from(cs.a());
    let mut rhs = DVector::zeros(n + m);
    rhs.rows_mut(0, n).copy_from(&(-&quad.c));
    rhs.rows_mut(n, m).copy_from(cs.b());
    let lu = kkt.lu();
    let sol = lu.solve(&rhs).ok_or(Error::SingularKkt)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularKkt);
    }
    let x = sol.rows(0, n).into_owned();
    let f = quad.value(&x);
    Ok((x, f))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    NonConvex,
}

/// The test objectives available by name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Sphere,
    SumSquares,
    Trid,
    RotatedHyperEllipsoid,
    Booth,
    Matyas,
    Zakharov,
    /// `Σ i xᵢ⁴` plus a constant drawn once from a fixed seed.
    QuarticNoise {
        offset: f64,
    },
    Rosenbrock,
    DixonPrice,
    Griewank,
    Levy,
    Rastrigin,
    Ackley,
    Powell,
    StyblinskiTang,
    Schwefel,
    ThreeHumpCamel,
    SixHumpCamel,
    Beale,
}

impl TestFunction {
    pub fn quartic_noise() -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(QUARTIC_NOISE_SEED);
        TestFunction::QuarticNoise {
            offset: rng.random::<f64>(),
        }
    }

    /// Dimension the function is restricted to, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        use TestFunction::*;
        match self {
            Booth | Matyas | ThreeHumpCamel | SixHumpCamel | Beale => Some(2),
            _ => None,
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if let Some(d) = self.fixed_dim() {
            if n != d {
                return Err(Error::DimensionError(format!(
                    "{self:?} is defined for n = {d} only"
                )));
            }
        }
        if matches!(self, TestFunction::Powell) && !n.is_multiple_of(4) {
            return Err(Error::DimensionError(
                "Powell needs n divisible by 4".into(),
            ));
        }
        if matches!(
            self,
            TestFunction::Rosenbrock | TestFunction::DixonPrice | TestFunction::Levy
        ) && n < 2
        {
            return Err(Error::DimensionError(format!("{self:?} needs n >= 2")));
        }
        Ok(())
    }
}

impl Objective for TestFunction {
    fn value(&self, x: &DVector<f64>) -> f64 {
        use TestFunction::*;
        let n = x.len();
        match *self {
            Sphere => x.norm_squared(),
            SumSquares => x
                .iter()
                .enumerate()
                .map(|(i, v)| (i + 1) as f64 * v * v)
                .sum(),
            Trid => {
                let a: f64 = x.iter().map(|v| (v - 1.0).powi(2)).sum();
                let b: f64 = x.as_slice().windows(2).map(|w| w[0] * w[1]).sum();
                a - b
            }
            RotatedHyperEllipsoid => x
                .iter()
                .enumerate()
                .map(|(j, v)| (n - j) as f64 * v * v)
                .sum(),
            Booth => (x[0] + 2.0 * x[1] - 7.0).powi(2) + (2.0 * x[0] + x[1] - 5.0).powi(2),
            Matyas => 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1],
            Zakharov => {
                let s = zakharov_sum(x);
                x.norm_squared() + s * s + s.powi(4)
            }
            QuarticNoise { offset } => {
                x.iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                    .sum::<f64>()
                    + offset
            }
            Rosenbrock => x
                .as_slice()
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            DixonPrice => {
                (x[0] - 1.0).powi(2)
                    + (1..n)
                        .map(|i| (i + 1) as f64 * (2.0 * x[i] * x[i] - x[i - 1]).powi(2))
                        .sum::<f64>()
            }
            Griewank => {
                let sum: f64 = x.norm_squared() / 4000.0;
                let prod: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                sum - prod + 1.0
            }
            Levy => {
                let w = |v: f64| 1.0 + (v - 1.0) / 4.0;
                let w1 = w(x[0]);
                let wn = w(x[n - 1]);
                let mid: f64 = (0..n - 1)
                    .map(|i| {
                        let wi = w(x[i]);
                        (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2))
                    })
                    .sum();
                (PI * w1).sin().powi(2)
                    + mid
                    + (wn - 1.0).powi(2) * (1.0 + (2.0 * PI * wn).sin().powi(2))
            }
            Rastrigin => {
                10.0 * n as f64
                    + x.iter()
                        .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                        .sum::<f64>()
            }
            Ackley => {
                let (a, b, c) = (20.0, 0.2, 2.0 * PI);
                let r = (x.norm_squared() / n as f64).sqrt();
                let cos_mean = x.iter().map(|v| (c * v).cos()).sum::<f64>() / n as f64;
                -a * (-b * r).exp() - cos_mean.exp() + a + E
            }
            Powell => x
                .as_slice()
                .chunks_exact(4)
                .map(|q| {
                    (q[0] + 10.0 * q[1]).powi(2)
                        + 5.0 * (q[2] - q[3]).powi(2)
                        + (q[1] - 2.0 * q[2]).powi(4)
                        + 10.0 * (q[0] - q[3]).powi(4)
                })
                .sum(),
            StyblinskiTang => {
                0.5 * x
                    .iter()
                    .map(|v| v.powi(4) - 16.0 * v * v + 5.0 * v)
                    .sum::<f64>()
            }
            Schwefel => {
                418.9829 * n as f64 - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
            }
            ThreeHumpCamel => {
                let (a, b) = (x[0], x[1]);
                2.0 * a * a - 1.05 * a.powi(4) + a.powi(6) / 6.0 + a * b + b * b
            }
            SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                (4.0 - 2.1 * a * a + a.powi(4) / 3.0) * a * a + a * b + (-4.0 + 4.0 * b * b) * b * b
            }
            Beale => {
                let (a, b) = (x[0], x[1]);
                (1.5 - a + a * b).powi(2)
                    + (2.25 - a + a * b * b).powi(2)
                    + (2.625 - a + a * b.powi(3)).powi(2)
            }
        }
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        use TestFunction::*;
        let n = x.len();
        match *self {
            Sphere => 2.0 * x,
            SumSquares => DVector::from_fn(n, |i, _| 2.0 * (i + 1) as f64 * x[i]),
            Trid => DVector::from_fn(n, |i, _| {
                let left = if i > 0 { x[i - 1] } else { 0.0 };
                let right = if i + 1 < n { x[i + 1] } else { 0.0 };
                2.0 * (x[i] - 1.0) - left - right
            }),
            RotatedHyperEllipsoid => DVector::from_fn(n, |j, _| 2.0 * (n - j) as f64 * x[j]),
            Booth => {
                let r1 = x[0] + 2.0 * x[1] - 7.0;
                let r2 = 2.0 * x[0] + x[1] - 5.0;
                DVector::from_vec(vec![2.0 * r1 + 4.0 * r2, 4.0 * r1 + 2.0 * r2])
            }
            Matyas => DVector::from_vec(vec![0.52 * x[0] - 0.48 * x[1], 0.52 * x[1] - 0.48 * x[0]]),
            Zakharov => {
                let s = zakharov_sum(x);
                let outer = 2.0 * s + 4.0 * s.powi(3);
                DVector::from_fn(n, |i, _| 2.0 * x[i] + outer * 0.5 * (i + 1) as f64)
            }
            QuarticNoise { .. } => DVector::from_fn(n, |i, _| 4.0 * (i + 1) as f64 * x[i].powi(3)),
            Rosenbrock => {
                let mut g = DVector::zeros(n);
                for i in 0..n - 1 {
                    let t = x[i + 1] - x[i] * x[i];
                    g[i] += -400.0 * x[i] * t - 2.0 * (1.0 - x[i]);
                    g[i + 1] += 200.0 * t;
                }
                g
            }
            DixonPrice => {
                let mut g = DVector::zeros(n);
                g[0] = 2.0 * (x[0] - 1.0);
                for i in 1..n {
                    let w = (i + 1) as f64;
                    let t = 2.0 * x[i] * x[i] - x[i - 1];
                    g[i] += 8.0 * w * t * x[i];
                    g[i - 1] -= 2.0 * w * t;
                }
                g
            }
            Griewank => {
                let angles: Vec<f64> = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v / ((i + 1) as f64).sqrt())
                    .collect();
                // products of cosines excluding index i, via prefix/suffix scans
                let mut prefix = vec![1.0; n + 1];
                for i in 0..n {
                    prefix[i + 1] = prefix[i] * angles[i].cos();
                }
                let mut suffix = vec![1.0; n + 1];
                for i in (0..n).rev() {
                    suffix[i] = suffix[i + 1] * angles[i].cos();
                }
                DVector::from_fn(n, |i, _| {
                    let others = prefix[i] * suffix[i + 1];
                    x[i] / 2000.0 + others * angles[i].sin() / ((i + 1) as f64).sqrt()
                })
            }
            Levy => {
                let w: Vec<f64> = x.iter().map(|v| 1.0 + (v - 1.0) / 4.0).collect();
                let mut g = DVector::zeros(n);
                g[0] += PI * (2.0 * PI * w[0]).sin();
                for i in 0..n - 1 {
                    let wi = w[i];
                    let arg = PI * wi + 1.0;
                    g[i] += 2.0 * (wi - 1.0) * (1.0 + 10.0 * arg.sin().powi(2))
                        + (wi - 1.0).powi(2) * 10.0 * PI * (2.0 * arg).sin();
                }
                let wn = w[n - 1];
                g[n - 1] += 2.0 * (wn - 1.0) * (1.0 + (2.0 * PI * wn).sin().powi(2))
                    + (wn - 1.0).powi(2) * 2.0 * PI * (4.0 * PI * wn).sin();
                g / 4.0
            }
            Rastrigin => x.map(|v| 2.0 * v + 20.0 * PI * (2.0 * PI * v).sin()),
            Ackley => {
                let (a, b, c) = (20.0, 0.2, 2.0 * PI);
                let nf = n as f64;
                let r = (x.norm_squared() / nf).sqrt();
                let cos_mean = x.iter().map(|v| (c * v).cos()).sum::<f64>() / nf;
                let radial = if r > 0.0 {
                    a * b * (-b * r).exp() / (nf * r)
                } else {
                    0.0
                };
                let wave = cos_mean.exp() * c / nf;
                x.map(|v| radial * v + wave * (c * v).sin())
            }
            Powell => {
                let mut g = DVector::zeros(n);
                for k in (0..n).step_by(4) {
                    let (a, b, c, d) = (x[k], x[k + 1], x[k + 2], x[k + 3]);
                    let t1 = a + 10.0 * b;
                    let t2 = c - d;
                    let t3 = b - 2.0 * c;
                    let t4 = a - d;
                    g[k] = 2.0 * t1 + 40.0 * t4.powi(3);
                    g[k + 1] = 20.0 * t1 + 4.0 * t3.powi(3);
                    g[k + 2] = 10.0 * t2 - 8.0 * t3.powi(3);
                    g[k + 3] = -10.0 * t2 - 40.0 * t4.powi(3);
                }
                g
            }
            StyblinskiTang => x.map(|v| 2.0 * v.powi(3) - 16.0 * v + 2.5),
            Schwefel => x.map(|v| {
                let r = v.abs().sqrt();
                -(r.sin() + 0.5 * r * r.cos())
            }),
            ThreeHumpCamel => {
                let (a, b) = (x[0], x[1]);
                DVector::from_vec(vec![4.0 * a - 4.2 * a.powi(3) + a.powi(5) + b, a + 2.0 * b])
            }
            SixHumpCamel => {
                let (a, b) = (x[0], x[1]);
                DVector::from_vec(vec![
                    8.0 * a - 8.4 * a.powi(3) + 2.0 * a.powi(5) + b,
                    a - 8.0 * b + 16.0 * b.powi(3),
                ])
            }
            Beale => {
                let (a, b) = (x[0], x[1]);
                let t1 = 1.5 - a + a * b;
                let t2 = 2.25 - a + a * b * b;
                let t3 = 2.625 - a + a * b.powi(3);
                DVector::from_vec(vec![
                    2.0 * t1 * (b - 1.0) + 2.0 * t2 * (b * b - 1.0) + 2.0 * t3 * (b.powi(3) - 1.0),
                    2.0 * t1 * a + 4.0 * t2 * a * b + 6.0 * t3 * a * b * b,
                ])
            }
        }
    }

    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        use TestFunction::*;
        let n = x.len();
        if let Some(quad) = self.quadratic(n) {
            return Some(quad.q);
        }
        let h = match *self {
            Zakharov => {
                let s = zakharov_sum(x);
                let c = DVector::from_fn(n, |i, _| 0.5 * (i + 1) as f64);
                DMatrix::identity(n, n) * 2.0 + (&c * c.transpose()) * (2.0 + 12.0 * s * s)
            }
            QuarticNoise { .. } => DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| {
                12.0 * (i + 1) as f64 * x[i] * x[i]
            })),
            Rosenbrock => {
                let mut h = DMatrix::zeros(n, n);
                for i in 0..n - 1 {
                    h[(i, i)] += 1200.0 * x[i] * x[i] - 400.0 * x[i + 1] + 2.0;
                    h[(i, i + 1)] -= 400.0 * x[i];
                    h[(i + 1, i)] -= 400.0 * x[i];
                    h[(i + 1, i + 1)] += 200.0;
                }
                h
            }
            Rastrigin => {
                DMatrix::from_diagonal(&x.map(|v| 2.0 + 40.0 * PI * PI * (2.0 * PI * v).cos()))
            }
            StyblinskiTang => DMatrix::from_diagonal(&x.map(|v| 6.0 * v * v - 16.0)),
            ThreeHumpCamel => {
                let a = x[0];
                DMatrix::from_row_slice(
                    2,
                    2,
                    &[4.0 - 12.6 * a * a + 5.0 * a.powi(4), 1.0, 1.0, 2.0],
                )
            }
            _ => return None,
        };
        Some(h)
    }

    fn quadratic(&self, n: usize) -> Option<Quadratic> {
        use TestFunction::*;
        let (q, c, constant) = match *self {
            Sphere => (DMatrix::identity(n, n) * 2.0, DVector::zeros(n), 0.0),
            SumSquares => (
                DMatrix::from_diagonal(&DVector::from_fn(n, |i, _| 2.0 * (i + 1) as f64)),
                DVector::zeros(n),
                0.0,
            ),
            Trid => (
                DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
                    0 => 2.0,
                    1 => -1.0,
                    _ => 0.0,
                }),
                DVector::from_element(n, -2.0),
                n as f64,
            ),
            RotatedHyperEllipsoid => (
                DMatrix::from_diagonal(&DVector::from_fn(n, |j, _| 2.0 * (n - j) as f64)),
                DVector::zeros(n),
                0.0,
            ),
            Booth if n == 2 => (
                DMatrix::from_row_slice(2, 2, &[10.0, 8.0, 8.0, 10.0]),
                DVector::from_vec(vec![-34.0, -38.0]),
                74.0,
            ),
            Matyas if n == 2 => (
                DMatrix::from_row_slice(2, 2, &[0.52, -0.48, -0.48, 0.52]),
                DVector::zeros(2),
                0.0,
            ),
            _ => return None,
        };
        Some(Quadratic { q, c, constant })
    }
}

fn zakharov_sum(x: &DVector<f64>) -> f64 {
    x.iter()
        .enumerate()
        .map(|(i, v)| 0.5 * (i + 1) as f64 * v)
        .sum()
}

/// A concrete constrained problem ready to be solved.
#[derive(Clone)]
pub struct ProblemInstance {
    name: String,
    cs: ConstraintSystem,
    x0: DVector<f64>,
    objective: Arc<dyn Objective>,
    published_fstar: Option<f64>,
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("n", &self.dim())
            .field("m", &self.cs.rows())
            .finish_non_exhaustive()
    }
}

impl ProblemInstance {
    /// A problem with the default start `x0 = ones(n)`.
    pub fn new(
        name: impl Into<String>,
        cs: ConstraintSystem,
        objective: Arc<dyn Objective>,
    ) -> Self {
        let n = cs.cols();
        Self {
            name: name.into(),
            cs,
            x0: DVector::from_element(n, 1.0),
            objective,
            published_fstar: None,
        }
    }

    pub fn with_start(mut self, x0: DVector<f64>) -> Result<Self> {
        if x0.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x0.len(),
            });
        }
        self.x0 = x0;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.cs.cols()
    }

    pub fn constraints(&self) -> &ConstraintSystem {
        &self.cs
    }

    pub fn start(&self) -> &DVector<f64> {
        &self.x0
    }

    pub fn objective(&self) -> &dyn Objective {
        self.objective.as_ref()
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.objective.value(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.objective.gradient(x)
    }

    /// Optimal value reported for this row in the published result tables.
    /// Informational only; it was obtained under a possibly different
    /// constraint reading.
    pub fn published_fstar(&self) -> Option<f64> {
        self.published_fstar
    }

    /// Exact constrained optimum for quadratic objectives.
    pub fn quadratic_optimum(&self) -> Option<Result<(DVector<f64>, f64)>> {
        self.objective
            .quadratic(self.dim())
            .map(|quad| quadratic_oracle(&self.cs, &quad))
    }
}

/// A named entry of the benchmark catalog.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub convexity: Convexity,
    pub default_n: usize,
    pub rows: RowCount,
    pub published_fstar: Option<f64>,
    function: fn() -> TestFunction,
}

impl CatalogEntry {
    pub fn function(&self) -> TestFunction {
        (self.function)()
    }

    /// Builds the instance at `n` (or the default dimension).
    pub fn instantiate(&self, n: Option<usize>) -> Result<ProblemInstance> {
        let n = n.unwrap_or(self.default_n);
        let function = self.function();
        function.check_dim(n)?;
        let m = self.rows.rows(n)?;
        let cs = build_constraints_with(n, m, RowPattern::default())?;
        let mut problem = ProblemInstance::new(self.name, cs, Arc::new(function));
        if n == self.default_n {
            problem.published_fstar = self.published_fstar;
        }
        Ok(problem)
    }
}

macro_rules! entry {
    ($name:literal, $cvx:ident, $n:expr, $f:expr, $pub:expr) => {
        CatalogEntry {
            name: $name,
            convexity: Convexity::$cvx,
            default_n: $n,
            rows: RowCount::Half,
            published_fstar: $pub,
            function: || $f,
        }
    };
}

/// Every benchmark problem, convex entries first.
pub fn catalog() -> Vec<CatalogEntry> {
    use TestFunction::*;
    vec![
        entry!("sphere", Convex, 1000, Sphere, Some(1.67e2)),
        entry!("sum_squares", Convex, 1000, SumSquares, Some(4.08e4)),
        entry!("trid", Convex, 1000, Trid, Some(5.82e2)),
        entry!(
            "rotated_hyper_ellipsoid",
            Convex,
            1000,
            RotatedHyperEllipsoid,
            Some(1.25e5)
        ),
        entry!("booth", Convex, 2, Booth, Some(9.00)),
        entry!("matyas", Convex, 2, Matyas, Some(0.18)),
        entry!("zakharov", Convex, 10, Zakharov, Some(7.31)),
        entry!(
            "quartic_noise",
            Convex,
            1000,
            TestFunction::quartic_noise(),
            Some(1.01e2)
        ),
        entry!("rosenbrock", NonConvex, 1000, Rosenbrock, Some(9.26e3)),
        entry!("dixon_price", NonConvex, 1000, DixonPrice, Some(9.00e4)),
        entry!("griewank", NonConvex, 1000, Griewank, Some(0.86)),
        entry!("levy", NonConvex, 1000, Levy, Some(71.06)),
        entry!("rastrigin", NonConvex, 1000, Rastrigin, Some(2.93e3)),
        entry!("ackley", NonConvex, 1000, Ackley, Some(2.64)),
        entry!("powell", NonConvex, 1000, Powell, Some(4.26e3)),
        entry!(
            "styblinski_tang",
            NonConvex,
            1000,
            StyblinskiTang,
            Some(-9.61e3)
        ),
        entry!("schwefel", NonConvex, 1000, Schwefel, Some(4.19e5)),
        entry!("three_hump_camel", NonConvex, 2, ThreeHumpCamel, Some(0.55)),
        entry!("six_hump_camel", NonConvex, 2, SixHumpCamel, Some(0.74)),
        entry!("beale", NonConvex, 2, Beale, Some(3.35)),
    ]
}

pub fn lookup(name: &str) -> Result<CatalogEntry> {
    let key = name.to_ascii_lowercase().replace('-', "_");
    catalog()
        .into_iter()
        .find(|e| e.name == key)
        .ok_or_else(|| Error::UnknownProblem(name.to_string()))
}

/// Looks up `name` and builds it at dimension `n` (or its default).
pub fn problem(name: &str, n: Option<usize>) -> Result<ProblemInstance> {
    lookup(name)?.instantiate(n)
}
