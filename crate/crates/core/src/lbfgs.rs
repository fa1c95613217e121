//! Memory-one L-BFGS preconditioner used while the time step is large.
//!
//! The matrix is `B = I − s sᵀ/(sᵀs) + y yᵀ/(yᵀy)` when the curvature guard
//! `|sᵀy| > θ‖s‖²` holds and the identity otherwise. Only the most recent
//! pair is kept, so both `B v` and `B⁻¹ v` cost a handful of inner products.

use nalgebra::DVector;

/// The most recent step and projected-gradient difference.
#[derive(Debug, Clone, PartialEq)]
pub struct LbfgsPair {
    s: DVector<f64>,
    y: DVector<f64>,
    sty: f64,
    sts: f64,
    yty: f64,
    usable: bool,
}

impl LbfgsPair {
    /// The zero pair, which always yields the identity.
    pub fn zero(n: usize) -> Self {
        Self {
            s: DVector::zeros(n),
            y: DVector::zeros(n),
            sty: 0.0,
            sts: 0.0,
            yty: 0.0,
            usable: false,
        }
    }

    pub fn new(s: DVector<f64>, y: DVector<f64>, theta: f64) -> Self {
        assert_eq!(s.len(), y.len(), "pair vectors must have equal length");
        let sty = s.dot(&y);
        let sts = s.norm_squared();
        let yty = y.norm_squared();
        let usable = sts > 0.0 && yty > 0.0 && sty.abs() > theta * sts;
        Self {
            s,
            y,
            sty,
            sts,
            yty,
            usable,
        }
    }

    pub fn s(&self) -> &DVector<f64> {
        &self.s
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn is_usable(&self) -> bool {
        self.usable
    }

    /// `B⁻¹ v` via the closed-form rank-two inverse.
    pub fn apply_inverse(&self, v: &DVector<f64>) -> DVector<f64> {
        if !self.usable {
            return v.clone();
        }
        let stv = self.s.dot(v);
        let ytv = self.y.dot(v);
        let coeff_s = 2.0 * self.yty * stv / (self.sty * self.sty) - ytv / self.sty;
        let coeff_y = -stv / self.sty;
        let mut out = v.clone();
        out.axpy(coeff_y, &self.y, 1.0);
        out.axpy(coeff_s, &self.s, 1.0);
        out
    }

    /// `B v`.
    pub fn apply_forward(&self, v: &DVector<f64>) -> DVector<f64> {
        if !self.usable {
            return v.clone();
        }
        let mut out = v.clone();
        out.axpy(-self.s.dot(v) / self.sts, &self.s, 1.0);
        out.axpy(self.y.dot(v) / self.yty, &self.y, 1.0);
        out
    }
}

/// Builds a pair and decides whether it passes the curvature guard.
pub fn make_pair(s: DVector<f64>, y: DVector<f64>, theta: f64) -> LbfgsPair {
    LbfgsPair::new(s, y, theta)
}
