//! Curvature of invariant metrics on `G/H` at the origin.
//!
//! Sign convention throughout: `R(U,V)W = nabla_U nabla_V W - nabla_V nabla_U W - nabla_[U,V] W`,
//! so that `<R(U,Y)Y,U>` is the (unnormalized) sectional curvature.
//!
//! Three closed forms are provided: the general Püttmann pairing, the
//! naturally reductive form, and the bi-invariant form `-1/4 [[U,Y],Y]`.
//! [`CurvatureContext::oracle_r`] evaluates the definition directly with the
//! Koszul-formula Levi-Civita connection and serves as an independent check
//! in the Lie-group case (`h = 0`).

use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{require_dim, LieAlgebra, ReductiveSplit, Vector};
use crate::error::{Error, Result};
use crate::linalg::Cholesky;
use crate::metric::InvariantMetric;
use crate::report::{Check, Report};
use crate::STRUCTURAL_TOLERANCE;

/// Runs every structural validator (Jacobi, split, metric) on the triple.
pub fn structural_report(algebra: &LieAlgebra, split: &ReductiveSplit, metric: &InvariantMetric, tol: f64) -> Report {
    let mut report = Report::new();
    report.push(algebra.check_jacobi(tol));
    report.extend(split.check_split(algebra, tol));
    report.extend(metric.check_metric(algebra, split, tol));
    report
}

/// Validated `(g, h + m, <.,.>)` bundle with the Gram factorization of `<.,.>|m` cached.
#[derive(Debug, Clone)]
pub struct CurvatureContext {
    algebra: LieAlgebra,
    split: ReductiveSplit,
    metric: InvariantMetric,
    tol: f64,
    gram_m: Cholesky,
}

impl CurvatureContext {
    pub fn new(algebra: LieAlgebra, split: ReductiveSplit, metric: InvariantMetric) -> Result<Self> {
        Self::with_tolerance(algebra, split, metric, STRUCTURAL_TOLERANCE)
    }

    pub fn with_tolerance(
        algebra: LieAlgebra,
        split: ReductiveSplit,
        metric: InvariantMetric,
        tol: f64,
    ) -> Result<Self> {
        let n = algebra.dim();
        if split.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: split.dim(),
            });
        }
        if metric.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: metric.dim(),
            });
        }
        let report = structural_report(&algebra, &split, &metric, tol);
        if !report.passed() {
            let names: Vec<String> = report.failures().map(|c| c.name.clone()).collect();
            return Err(Error::Validation(names.join(", ")));
        }
        let gram_m = Cholesky::new(&metric.gram().symmetrized().submatrix(split.m_indices()))?;
        Ok(Self {
            algebra,
            split,
            metric,
            tol,
            gram_m,
        })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn split(&self) -> &ReductiveSplit {
        &self.split
    }

    pub fn metric(&self) -> &InvariantMetric {
        &self.metric
    }

    /// Cholesky factor of the `<.,.>` Gram block on `m`.
    pub fn gram_m(&self) -> &Cholesky {
        &self.gram_m
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    /// True when `h = 0` and `phi = I`, the hypotheses of the bi-invariant closed form.
    pub fn is_bi_invariant(&self) -> bool {
        self.split.is_trivial() && self.metric.phi_is_identity(self.tol)
    }

    /// Validates that `x` is tangent to `G/H`: `h`-components below tolerance
    /// (relative to the largest coordinate) are dropped, larger ones rejected.
    pub fn to_m(&self, x: &Vector) -> Result<Vector> {
        require_dim(x, self.dim())?;
        if !x.is_finite() {
            return Err(Error::NonFinite("vector"));
        }
        let residual = self.split.h_residual(x);
        let tolerance = self.tol * x.max_abs().max(1.0);
        if residual > tolerance {
            return Err(Error::OffComplement { residual, tolerance });
        }
        Ok(self.split.pm(x))
    }

    pub fn inner(&self, x: &Vector, y: &Vector) -> f64 {
        self.metric.ip(x, y)
    }

    pub fn norm(&self, x: &Vector) -> f64 {
        self.metric.norm(x)
    }

    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        self.algebra.br(x, y)
    }

    /// `<R(x,y)z,w>` by Püttmann's formula (with the minus sign matching our convention).
    pub fn puttmann_pairing(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> Result<f64> {
        let (x, y, z, w) = (self.to_m(x)?, self.to_m(y)?, self.to_m(z)?, self.to_m(w)?);
        Ok(self.pairing(&x, &y, &z, &w))
    }

    /// Püttmann pairing on vectors already in `m`.
    pub(crate) fn pairing(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        let m = &self.metric;
        let a = &self.algebra;
        let pm = |v: Vector| self.split.pm(&v);

        let xy = self.br(x, y);
        let zw = self.br(z, w);
        let b_minus = 0.5 * (m.ip0(&m.bm(a, x, y), &zw) + m.ip0(&xy, &m.bm(a, z, w)));

        let quarter = 0.25
            * (m.ip(&self.br(x, w), &pm(self.br(y, z)))
                - m.ip(&self.br(x, z), &pm(self.br(y, w)))
                - 2.0 * m.ip(&xy, &pm(zw)));

        let b_plus =
            m.ip0(&m.bp(a, x, w), &m.apply_inv(&m.bp(a, y, z))) - m.ip0(&m.bp(a, x, z), &m.apply_inv(&m.bp(a, y, w)));

        -(b_minus + quarter + b_plus)
    }

    /// Solves `<v, w> = rhs(w)` for `v` in `m`, given `rhs` on the `m`-basis.
    fn raise_m(&self, rhs: &[f64]) -> Vector {
        let sol = self.gram_m.solve(rhs);
        let mut v = Vector::zeros(self.dim()).into_inner();
        for (&i, s) in self.split.m_indices().iter().zip(sol) {
            v[i] = s;
        }
        Vector::from(v)
    }

    /// The vector `R(u,y)y` in `m`, recovered from its Püttmann pairings.
    pub fn curvature_vector(&self, u: &Vector, y: &Vector) -> Result<Vector> {
        let (u, y) = (self.to_m(u)?, self.to_m(y)?);
        Ok(self.curvature_vector_m(&u, &y))
    }

    pub(crate) fn curvature_vector_m(&self, u: &Vector, y: &Vector) -> Vector {
        let n = self.dim();
        let rhs: Vec<f64> = self
            .split
            .m_indices()
            .iter()
            .map(|&j| self.pairing(u, y, y, &Vector::basis(n, j)))
            .collect();
        self.raise_m(&rhs)
    }

    /// Sectional curvature of `span{u, y}` from the Püttmann pairing.
    pub fn sectional(&self, u: &Vector, y: &Vector) -> Result<f64> {
        let (u, y) = (self.to_m(u)?, self.to_m(y)?);
        let area = self.inner(&u, &u) * self.inner(&y, &y) - self.inner(&u, &y) * self.inner(&u, &y);
        if area <= 1e-24 * (self.inner(&u, &u) * self.inner(&y, &y)).max(f64::MIN_POSITIVE) {
            return Err(Error::DegenerateFlag {
                what: "area",
                value: area,
                threshold: 0.0,
            });
        }
        Ok(self.pairing(&u, &y, &y, &u) / area)
    }

    /// Naturally reductive condition on `m`:
    /// `<x, [z,y]_m> + <[z,x]_m, y> = 0` for all basis triples of `m`.
    pub fn naturally_reductive_check(&self, tol: f64) -> Check {
        let n = self.dim();
        let b = |i| Vector::basis(n, i);
        let mi = self.split.m_indices();
        let mut worst = 0.0_f64;
        for &x in mi {
            for &y in mi {
                for &z in mi {
                    let zy = self.split.pm(&self.br(&b(z), &b(y)));
                    let zx = self.split.pm(&self.br(&b(z), &b(x)));
                    let r = self.inner(&b(x), &zy) + self.inner(&zx, &b(y));
                    worst = worst.max(r.abs());
                }
            }
        }
        Check::residual("naturally reductive", worst, tol)
    }

    /// `R(u,y)y = 1/4 [y,[u,y]_m]_m + [y,[u,y]_h]`, valid on naturally reductive spaces.
    pub fn naturally_reductive_r(&self, u: &Vector, y: &Vector) -> Result<Vector> {
        let (u, y) = (self.to_m(u)?, self.to_m(y)?);
        let uy = self.br(&u, &y);
        let m_part = self.split.pm(&self.br(&y, &self.split.pm(&uy))).scale(0.25);
        let h_part = self.br(&y, &self.split.ph(&uy));
        Ok(&m_part + &h_part)
    }

    /// `R(u,y)y = -1/4 [[u,y],y]`, valid for bi-invariant metrics on Lie groups.
    /// Computed regardless of hypotheses; see [`CurvatureContext::is_bi_invariant`].
    pub fn bi_invariant_r(&self, u: &Vector, y: &Vector) -> Result<Vector> {
        let (u, y) = (self.to_m(u)?, self.to_m(y)?);
        Ok(self.br(&self.br(&u, &y), &y).scale(-0.25))
    }

    /// Levi-Civita connection of the left-invariant metric on left-invariant
    /// fields, from `2<nabla_u v, w> = <[u,v],w> - <[v,w],u> + <[w,u],v>`.
    pub fn koszul_nabla(&self, u: &Vector, v: &Vector) -> Result<Vector> {
        if !self.split.is_trivial() {
            return Err(Error::NontrivialIsotropy);
        }
        require_dim(u, self.dim())?;
        require_dim(v, self.dim())?;
        Ok(self.nabla(u, v))
    }

    fn nabla(&self, u: &Vector, v: &Vector) -> Vector {
        let n = self.dim();
        let uv = self.br(u, v);
        let rhs: Vec<f64> = (0..n)
            .map(|j| {
                let w = Vector::basis(n, j);
                0.5 * (self.inner(&uv, &w) - self.inner(&self.br(v, &w), u) + self.inner(&self.br(&w, u), v))
            })
            .collect();
        self.raise_m(&rhs)
    }

    /// `R(u,y)y` straight from the definition with the Koszul connection.
    pub fn oracle_r(&self, u: &Vector, y: &Vector) -> Result<Vector> {
        if !self.split.is_trivial() {
            return Err(Error::NontrivialIsotropy);
        }
        require_dim(u, self.dim())?;
        require_dim(y, self.dim())?;
        let nyy = self.nabla(y, y);
        let nuy = self.nabla(u, y);
        let t1 = self.nabla(u, &nyy);
        let t2 = self.nabla(y, &nuy);
        let t3 = self.nabla(&self.br(u, y), y);
        Ok(&(&t1 - &t2) - &t3)
    }
}
