//! Invariant inner products: the bi-invariant reference metric `<.,.>_0`,
//! the metric endomorphism `phi`, and the induced metric `<x,y> = <phi x, y>_0`.

use alloc::format;

use crate::algebra::{require_dim, LieAlgebra, ReductiveSplit, Vector};
use crate::error::{Error, Result};
use crate::linalg::{spectral_bounds, Matrix};
use crate::report::{Check, Report};

/// Smallest admissible ratio `lambda_min / lambda_max` for positive definiteness.
pub const SPD_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantMetric {
    q0: Matrix,
    phi: Matrix,
    phi_inv: Matrix,
    /// Gram matrix of `<.,.>`: `G = phi^T q0`.
    gram: Matrix,
}

impl InvariantMetric {
    /// Builds the metric from the Gram matrix of `<.,.>_0` and the matrix of `phi`.
    ///
    /// Only shape, finiteness and invertibility of `phi` are enforced here;
    /// the remaining invariants are reported by [`InvariantMetric::check_metric`].
    pub fn new(q0: Matrix, phi: Matrix) -> Result<Self> {
        let n = q0.rows();
        if !q0.is_square() {
            return Err(Error::InvalidMetric("q0 must be square".into()));
        }
        if phi.rows() != n || phi.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phi.rows(),
            });
        }
        if !q0.is_finite() {
            return Err(Error::NonFinite("q0"));
        }
        if !phi.is_finite() {
            return Err(Error::NonFinite("phi"));
        }
        let phi_inv = phi
            .inverse()
            .map_err(|_| Error::InvalidMetric("phi is singular".into()))?;
        let gram = phi.transpose().mul(&q0);
        Ok(Self { q0, phi, phi_inv, gram })
    }

    /// `q0 = I`, `phi = I`.
    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim), Matrix::identity(dim)).expect("identity metric")
    }

    /// `q0 = I` with a diagonal `phi`.
    pub fn diagonal(phi_diag: &[f64]) -> Result<Self> {
        let n = phi_diag.len();
        Self::new(Matrix::identity(n), Matrix::diagonal(phi_diag))
    }

    pub fn dim(&self) -> usize {
        self.q0.rows()
    }

    pub fn q0(&self) -> &Matrix {
        &self.q0
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn phi_is_identity(&self, tol: f64) -> bool {
        self.phi.max_abs_diff(&Matrix::identity(self.dim())) <= tol
    }

    pub fn inner0(&self, x: &Vector, y: &Vector) -> Result<f64> {
        require_dim(x, self.dim())?;
        require_dim(y, self.dim())?;
        Ok(self.ip0(x, y))
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> Result<f64> {
        require_dim(x, self.dim())?;
        require_dim(y, self.dim())?;
        Ok(self.ip(x, y))
    }

    pub(crate) fn ip0(&self, x: &Vector, y: &Vector) -> f64 {
        bilinear(&self.q0, x, y)
    }

    pub(crate) fn ip(&self, x: &Vector, y: &Vector) -> f64 {
        bilinear(&self.gram, x, y)
    }

    pub(crate) fn norm(&self, x: &Vector) -> f64 {
        libm::sqrt(self.ip(x, x).max(0.0))
    }

    pub fn phi_apply(&self, x: &Vector) -> Result<Vector> {
        require_dim(x, self.dim())?;
        Ok(self.apply(x))
    }

    pub fn phi_inverse(&self, x: &Vector) -> Result<Vector> {
        require_dim(x, self.dim())?;
        Ok(self.apply_inv(x))
    }

    pub(crate) fn apply(&self, x: &Vector) -> Vector {
        Vector::from(self.phi.mul_vec(x.as_slice()))
    }

    pub(crate) fn apply_inv(&self, x: &Vector) -> Vector {
        Vector::from(self.phi_inv.mul_vec(x.as_slice()))
    }

    /// `B+(x,y) = 1/2 ([x, phi y] + [y, phi x])`
    pub fn b_plus(&self, algebra: &LieAlgebra, x: &Vector, y: &Vector) -> Result<Vector> {
        require_dim(x, self.dim())?;
        require_dim(y, self.dim())?;
        Ok(self.bp(algebra, x, y))
    }

    /// `B-(x,y) = 1/2 ([phi x, y] + [x, phi y])`
    pub fn b_minus(&self, algebra: &LieAlgebra, x: &Vector, y: &Vector) -> Result<Vector> {
        require_dim(x, self.dim())?;
        require_dim(y, self.dim())?;
        Ok(self.bm(algebra, x, y))
    }

    pub(crate) fn bp(&self, a: &LieAlgebra, x: &Vector, y: &Vector) -> Vector {
        let s = &a.br(x, &self.apply(y)) + &a.br(y, &self.apply(x));
        s.scale(0.5)
    }

    pub(crate) fn bm(&self, a: &LieAlgebra, x: &Vector, y: &Vector) -> Vector {
        let s = &a.br(&self.apply(x), y) + &a.br(x, &self.apply(y));
        s.scale(0.5)
    }

    /// Itemized validation of every metric invariant against `algebra` and `split`.
    pub fn check_metric(&self, algebra: &LieAlgebra, split: &ReductiveSplit, tol: f64) -> Report {
        let n = self.dim();
        let mut report = Report::new();
        if algebra.dim() != n || split.dim() != n {
            report.push(
                Check::residual("metric dimension", f64::INFINITY, 0.0)
                    .with_detail(format!("metric {n}, algebra {}", algebra.dim())),
            );
            return report;
        }
        let b = |i| Vector::basis(n, i);

        report.push(Check::residual("q0 symmetric", self.q0.asymmetry(), tol));
        report.push(spd_check("q0 positive definite", &self.q0));

        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let bij = algebra.br(&b(i), &b(j));
                for k in 0..n {
                    let bik = algebra.br(&b(i), &b(k));
                    let r = self.ip0(&bij, &b(k)) + self.ip0(&b(j), &bik);
                    worst = worst.max(r.abs());
                }
            }
        }
        report.push(Check::residual("q0 bi-invariant", worst, tol));

        let mut orth = 0.0_f64;
        for &i in split.h_indices() {
            for &j in split.m_indices() {
                orth = orth.max(self.q0[(i, j)].abs());
            }
        }
        report.push(Check::residual("h orthogonal to m", orth, tol));

        report.push(Check::residual("phi self-adjoint", self.gram.asymmetry(), tol));
        report.push(spd_check("phi positive definite", &self.gram));

        let mut block = 0.0_f64;
        for &i in split.h_indices() {
            for &j in split.m_indices() {
                block = block.max(self.phi[(i, j)].abs());
            }
            for k in 0..n {
                let expected = if k == i { 1.0 } else { 0.0 };
                block = block.max((self.phi[(k, i)] - expected).abs());
            }
        }
        report.push(Check::residual("phi block structure", block, tol));

        let mut ad_inv = 0.0_f64;
        for &h in split.h_indices() {
            for &x in split.m_indices() {
                let hx = algebra.br(&b(h), &b(x));
                for &y in split.m_indices() {
                    let hy = algebra.br(&b(h), &b(y));
                    let r = self.ip(&hx, &b(y)) + self.ip(&b(x), &hy);
                    ad_inv = ad_inv.max(r.abs());
                }
            }
        }
        report.push(Check::residual("Ad(h)-invariance", ad_inv, tol));
        report
    }
}

fn bilinear(m: &Matrix, x: &Vector, y: &Vector) -> f64 {
    let (x, y) = (x.as_slice(), y.as_slice());
    let mut s = 0.0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0.0 {
            continue;
        }
        let row = m.row(i);
        s += xi * row.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    }
    s
}

fn spd_check(name: &str, m: &Matrix) -> Check {
    let (lo, hi) = spectral_bounds(m);
    let ratio = if hi > 0.0 { lo / hi } else { f64::NEG_INFINITY };
    Check::at_least(name, ratio, SPD_RATIO).with_detail(format!("eigenvalues in [{lo:.3e}, {hi:.3e}]"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn inner_products() {
        let id = InvariantMetric::identity(3);
        let b0 = Vector::basis(3, 0);
        assert_eq!(id.inner(&b0, &b0).unwrap(), 1.0);
        let stretched = InvariantMetric::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(stretched.inner(&b0, &b0).unwrap(), 2.0);
        assert_eq!(stretched.inner0(&b0, &b0).unwrap(), 1.0);
    }

    #[test]
    fn b_plus_hand_value() {
        // B+(b1,b2) = 1/2([b1, b2] + [b2, 2 b1]) = 1/2(b3 - 2 b3) = -1/2 b3
        let a = su2();
        let m = InvariantMetric::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        let bp = m.b_plus(&a, &Vector::basis(3, 0), &Vector::basis(3, 1)).unwrap();
        assert_eq!(bp, Vector::from([0.0, 0.0, -0.5]));
    }

    #[test]
    fn phi_inverse_diagonal() {
        let m = InvariantMetric::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(
            m.phi_inverse(&Vector::basis(3, 0)).unwrap(),
            Vector::from([0.5, 0.0, 0.0])
        );
        let singular = InvariantMetric::diagonal(&[0.0, 1.0, 1.0]);
        assert!(matches!(singular, Err(Error::InvalidMetric(_))));
    }

    #[test]
    fn check_metric_su2() {
        let a = su2();
        let s = ReductiveSplit::trivial(3);
        assert!(InvariantMetric::identity(3).check_metric(&a, &s, 1e-9).passed());

        // q0 = diag(1,1,2): <[b1,b2],b3>_0 + <b2,[b1,b3]>_0 = 2 - 1 = 1
        let q0 = Matrix::diagonal(&[1.0, 1.0, 2.0]);
        let m = InvariantMetric::new(q0, Matrix::identity(3)).unwrap();
        let r = m.check_metric(&a, &s, 1e-9);
        let bi = r.get("q0 bi-invariant").unwrap();
        assert!(!r.passed());
        assert_eq!(bi.residual, 1.0);
    }

    #[test]
    fn check_metric_flags_bad_phi_on_homogeneous_split() {
        let a = su2();
        let s = ReductiveSplit::new(3, &[2]).unwrap();
        // unequal scaling of b1, b2 breaks Ad(h)-invariance for h = span{b3}
        let m = InvariantMetric::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        let r = m.check_metric(&a, &s, 1e-9);
        assert_eq!(r.get("Ad(h)-invariance").unwrap().residual, 1.0);
        // phi not identity on h
        let m = InvariantMetric::diagonal(&[1.0, 1.0, 3.0]).unwrap();
        let r = m.check_metric(&a, &s, 1e-9);
        assert_eq!(r.get("phi block structure").unwrap().residual, 2.0);
    }
}
