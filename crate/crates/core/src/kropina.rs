//! Kropina metrics `F(y) = <y,y> / <X,y>` on `m`, their fundamental tensor
//! and flag curvature.
//!
//! Flag curvature is evaluated three ways:
//! - `k_direct`: the definition `g_Y(R(U,Y)Y,U) / (g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2)`
//!   with `R(U,Y)Y` from the curvature module;
//! - `k_theorem_printed`: the closed form with numerator
//!   `3<U,X><R(U,Y)Y,X> + 2<Y,X><R(U,Y)Y,U>`;
//! - `k_theorem_consistent`: the same closed form with the second term carrying
//!   `<Y,X>^2`, which is what the fundamental-tensor identities actually give
//!   for an orthonormal flag.
//!
//! Both closed forms are reported; `k_direct` decides between them.

use alloc::vec::Vec;

use crate::algebra::{require_dim, Vector};
use crate::curvature::CurvatureContext;
use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// Relative threshold on `|<y,X>| / (|y| |X|)` below which `y` is treated as
/// lying on the singular hyperplane `beta = 0`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// Relative threshold for linear independence of a flag.
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-10;

/// Relative threshold on the `g_Y` Gram determinant of a flag.
pub const DETERMINANT_THRESHOLD: f64 = 1e-12;

/// Central-difference parameters for [`KropinaStructure::g_y_fd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdOptions {
    /// Step relative to `|y|` (scaled by `1 / max(|u|, |v|)`).
    pub rel_step: f64,
    /// Combine steps `h` and `h/2` to cancel the `O(h^2)` error term.
    pub richardson: bool,
}

impl Default for FdOptions {
    fn default() -> Self {
        Self {
            rel_step: 1e-4,
            richardson: true,
        }
    }
}

/// A flag `(P = span{y, u}, flagpole y)` in `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub y: Vector,
    pub u: Vector,
}

impl Flag {
    pub fn new(y: Vector, u: Vector) -> Self {
        Self { y, u }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// `<Y,X> < 0`: F is negative there, outside the cone where it is a Finsler norm.
    NegativeBeta,
    /// The bi-invariant closed form was requested with `phi != I` or `h != 0`.
    NotBiInvariant,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlagCurvatureResult {
    /// Orthonormalized flag actually evaluated.
    pub flag: Flag,
    /// `<Y,X>`
    pub beta_y: f64,
    /// `<U,X>`
    pub beta_u: f64,
    /// `<R(U,Y)Y, X>`
    pub r_dot_x: f64,
    /// `<R(U,Y)Y, U>`
    pub r_dot_u: f64,
    /// `<R(U,Y)Y, Y>`, zero up to roundoff.
    pub r_dot_y: f64,
    pub k_direct: f64,
    /// `k_direct` with the fundamental tensor taken by finite differences.
    pub k_direct_fd: f64,
    pub k_theorem_consistent: f64,
    pub k_theorem_printed: f64,
    pub residual_consistent_vs_direct: f64,
    pub residual_printed_vs_direct: f64,
    /// For the bi-invariant route: largest variant-for-variant gap to the general theorem.
    pub chain_residual: Option<f64>,
    pub warnings: Vec<Warning>,
}

/// `g_Y(Y,Y) g_Y(U,U) - g_Y(Y,U)^2` for a `<.,.>`-orthonormal flag, in closed form.
pub fn orthonormal_determinant(beta_y: f64, beta_u: f64) -> f64 {
    let b2 = beta_y * beta_y;
    2.0 * beta_u * beta_u / (b2 * b2 * b2) + 2.0 / (b2 * b2)
}

/// Expansion of `g_Y(R, U)` for a `<.,.>`-orthonormal flag in terms of the
/// pairings `<R,X>`, `<R,U>`, `<R,Y>`.
pub fn orthonormal_numerator(beta_y: f64, beta_u: f64, r_x: f64, r_u: f64, r_y: f64) -> f64 {
    (beta_u * (3.0 * r_x - 2.0 * r_y * beta_y) + 2.0 * beta_y * (r_u * beta_y - beta_u * r_y))
        / (beta_y * beta_y * beta_y * beta_y)
}

/// The closed forms: returns `(consistent, printed)` given `<R(U,Y)Y,X>` and `<R(U,Y)Y,U>`.
pub fn theorem_variants(beta_y: f64, beta_u: f64, r_x: f64, r_u: f64) -> (f64, f64) {
    let ratio = beta_u / beta_y;
    let denom = 2.0 * ratio * ratio + 2.0;
    let consistent = (3.0 * beta_u * r_x + 2.0 * beta_y * beta_y * r_u) / denom;
    let printed = (3.0 * beta_u * r_x + 2.0 * beta_y * r_u) / denom;
    (consistent, printed)
}

/// Invariant Kropina structure: a validated curvature context plus `X = X~_H` in `m`.
#[derive(Debug, Clone)]
pub struct KropinaStructure {
    ctx: CurvatureContext,
    x: Vector,
    x_norm: f64,
    fd: FdOptions,
}

impl KropinaStructure {
    pub fn new(ctx: CurvatureContext, x_field: Vector) -> Result<Self> {
        let report = Self::field_report(&ctx, &x_field, ctx.tolerance());
        if let Some(fail) = report.failures().next() {
            return Err(Error::InvalidField(fail.name.clone()));
        }
        let x = ctx.to_m(&x_field)?;
        let x_norm = ctx.norm(&x);
        Ok(Self {
            ctx,
            x,
            x_norm,
            fd: FdOptions::default(),
        })
    }

    pub fn with_fd_options(mut self, fd: FdOptions) -> Self {
        self.fd = fd;
        self
    }

    /// Checks the invariants of `X`: tangent to `G/H`, nonzero, and `[h, X] = 0`.
    pub fn field_report(ctx: &CurvatureContext, x: &Vector, tol: f64) -> Report {
        let mut report = Report::new();
        if x.dim() != ctx.dim() {
            report.push(Check::residual("X dimension", f64::INFINITY, 0.0));
            return report;
        }
        let split = ctx.split();
        let h_res = split.h_indices().iter().fold(0.0_f64, |m, &i| m.max(x[i].abs()));
        report.push(Check::residual("X in m", h_res, tol * x.max_abs().max(1.0)));
        report.push(Check::at_least("X nonzero", ctx.norm(&split.pm(x)), tol));
        let n = ctx.dim();
        let inv = split
            .h_indices()
            .iter()
            .fold(0.0_f64, |m, &h| m.max(ctx.br(&Vector::basis(n, h), x).max_abs()));
        report.push(Check::residual("[h,X] = 0", inv, tol));
        report
    }

    pub fn context(&self) -> &CurvatureContext {
        &self.ctx
    }

    pub fn x_field(&self) -> &Vector {
        &self.x
    }

    pub fn fd_options(&self) -> FdOptions {
        self.fd
    }

    /// `beta(y) = <y, X>`
    pub fn beta(&self, y: &Vector) -> f64 {
        self.ctx.inner(y, &self.x)
    }

    /// Returns `<y,X>` if `y` is off the singular hyperplane.
    pub fn admissible_beta(&self, y: &Vector) -> Result<f64> {
        let beta = self.beta(y);
        let threshold = DEGENERACY_THRESHOLD * self.ctx.norm(y) * self.x_norm;
        if !(beta.abs() >= threshold) || beta == 0.0 {
            return Err(Error::DegenerateDirection { beta, threshold });
        }
        Ok(beta)
    }

    /// `F(y) = <y,y> / <X,y>`
    pub fn kropina_f(&self, y: &Vector) -> Result<f64> {
        let y = self.ctx.to_m(y)?;
        let beta = self.admissible_beta(&y)?;
        Ok(self.ctx.inner(&y, &y) / beta)
    }

    fn f_squared(&self, y: &Vector) -> Result<f64> {
        let beta = self.admissible_beta(y)?;
        let a = self.ctx.inner(y, y);
        Ok(a * a / (beta * beta))
    }

    /// Fundamental tensor `g_Y(u, v)` in closed form.
    pub fn g_y_exact(&self, y: &Vector, u: &Vector, v: &Vector) -> Result<f64> {
        let (y, u, v) = (self.ctx.to_m(y)?, self.ctx.to_m(u)?, self.ctx.to_m(v)?);
        let b = self.admissible_beta(&y)?;
        Ok(self.g_y(b, &y, &u, &v))
    }

    fn g_y(&self, b: f64, y: &Vector, u: &Vector, v: &Vector) -> f64 {
        let ip = |p: &Vector, q: &Vector| self.ctx.inner(p, q);
        let a = ip(y, y);
        let (yu, yv, uv) = (ip(y, u), ip(y, v), ip(u, v));
        let (ux, vx) = (self.beta(u), self.beta(v));
        let pu = 2.0 * yu * b - ux * a;
        let pv = 2.0 * yv * b - vx * a;
        let sym = 2.0 * b * b * uv - 2.0 * b * (yv * ux + vx * yu) + 2.0 * a * ux * vx;
        (pu * pv + a * sym) / (b * b * b * b)
    }

    /// `g_Y(u, v) = 1/2 d^2/ds dt F^2(y + s u + t v)` by the 4-point cross stencil.
    pub fn g_y_fd(&self, y: &Vector, u: &Vector, v: &Vector, opts: FdOptions) -> Result<f64> {
        let (y, u, v) = (self.ctx.to_m(y)?, self.ctx.to_m(u)?, self.ctx.to_m(v)?);
        self.admissible_beta(&y)?;
        let scale = self.ctx.norm(&u).max(self.ctx.norm(&v));
        if scale == 0.0 {
            return Ok(0.0);
        }
        let h = opts.rel_step * self.ctx.norm(&y) / scale;
        let coarse = self.cross_stencil(&y, &u, &v, h)?;
        if !opts.richardson {
            return Ok(coarse);
        }
        let fine = self.cross_stencil(&y, &u, &v, 0.5 * h)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    fn cross_stencil(&self, y: &Vector, u: &Vector, v: &Vector, h: f64) -> Result<f64> {
        let point = |s: f64, t: f64| self.f_squared(&y.add_scaled(s, u).add_scaled(t, v));
        let d = point(h, h)? - point(h, -h)? - point(-h, h)? + point(-h, -h)?;
        Ok(0.5 * d / (4.0 * h * h))
    }

    /// Flag curvature from the definition with `r_vec = R(U,Y)Y` supplied.
    pub fn flag_curvature_direct(&self, flag: &Flag, r_vec: &Vector) -> Result<f64> {
        self.direct(flag, r_vec, None)
    }

    /// As [`KropinaStructure::flag_curvature_direct`] with `g_Y` by finite differences.
    pub fn flag_curvature_direct_fd(&self, flag: &Flag, r_vec: &Vector, opts: FdOptions) -> Result<f64> {
        self.direct(flag, r_vec, Some(opts))
    }

    fn direct(&self, flag: &Flag, r_vec: &Vector, fd: Option<FdOptions>) -> Result<f64> {
        let (y, u) = (self.ctx.to_m(&flag.y)?, self.ctx.to_m(&flag.u)?);
        require_dim(r_vec, self.ctx.dim())?;
        let r = self.ctx.to_m(r_vec)?;
        let b = self.admissible_beta(&y)?;
        let g = |p: &Vector, q: &Vector| -> Result<f64> {
            match fd {
                None => Ok(self.g_y(b, &y, p, q)),
                Some(opts) => self.g_y_fd(&y, p, q, opts),
            }
        };
        let gyy = g(&y, &y)?;
        let guu = g(&u, &u)?;
        let gyu = g(&y, &u)?;
        let det = gyy * guu - gyu * gyu;
        let threshold = DETERMINANT_THRESHOLD * (gyy * guu).abs();
        if !(det.abs() > threshold) {
            return Err(Error::DegenerateFlag {
                what: "g_Y determinant",
                value: det,
                threshold,
            });
        }
        Ok(g(&r, &u)? / det)
    }

    /// Gram-Schmidt in `<.,.>` keeping the flagpole direction.
    pub fn orthonormalize_flag(&self, flag: &Flag) -> Result<Flag> {
        let (y, u) = (self.ctx.to_m(&flag.y)?, self.ctx.to_m(&flag.u)?);
        let ny = self.ctx.norm(&y);
        if ny == 0.0 {
            return Err(Error::DegenerateFlag {
                what: "|y|",
                value: 0.0,
                threshold: 0.0,
            });
        }
        let y1 = y.scale(1.0 / ny);
        let perp = u.add_scaled(-self.ctx.inner(&u, &y1), &y1);
        let nu = self.ctx.norm(&u);
        let np = self.ctx.norm(&perp);
        let threshold = INDEPENDENCE_THRESHOLD * nu;
        if !(np > threshold) {
            return Err(Error::DegenerateFlag {
                what: "|u - proj_y u|",
                value: np,
                threshold,
            });
        }
        Ok(Flag::new(y1, perp.scale(1.0 / np)))
    }

    /// Flag curvature by the general closed form (both variants) and by the definition.
    pub fn flag_curvature_theorem(&self, flag: &Flag) -> Result<FlagCurvatureResult> {
        let flag = self.orthonormalize_flag(flag)?;
        let (y, u) = (&flag.y, &flag.u);
        let beta_y = self.admissible_beta(y)?;
        let beta_u = self.beta(u);
        let ctx = &self.ctx;
        let r = ctx.curvature_vector_m(u, y);
        let r_dot_x = ctx.pairing(u, y, y, &self.x);
        let r_dot_u = ctx.pairing(u, y, y, u);
        let r_dot_y = ctx.pairing(u, y, y, y);
        let (consistent, printed) = theorem_variants(beta_y, beta_u, r_dot_x, r_dot_u);
        self.assemble(
            flag,
            beta_y,
            beta_u,
            &r,
            (r_dot_x, r_dot_u, r_dot_y),
            (consistent, printed),
        )
    }

    /// Bi-invariant closed form with `[[U,Y],Y]`, cross-checked against
    /// [`KropinaStructure::flag_curvature_theorem`].
    pub fn flag_curvature_bi_invariant(&self, flag: &Flag) -> Result<FlagCurvatureResult> {
        let flag = self.orthonormalize_flag(flag)?;
        let (y, u) = (&flag.y, &flag.u);
        let beta_y = self.admissible_beta(y)?;
        let beta_u = self.beta(u);
        let ctx = &self.ctx;
        let d = ctx.br(&ctx.br(u, y), y);
        let d_x = ctx.inner(&d, &self.x);
        let d_u = ctx.inner(&d, u);
        let d_y = ctx.inner(&d, y);
        let ratio = beta_u / beta_y;
        let denom = 8.0 * ratio * ratio + 8.0;
        let printed = (-3.0 * beta_u * d_x - 2.0 * beta_y * d_u) / denom;
        let consistent = (-3.0 * beta_u * d_x - 2.0 * beta_y * beta_y * d_u) / denom;
        let r = d.scale(-0.25);
        let pairings = (-0.25 * d_x, -0.25 * d_u, -0.25 * d_y);
        let mut result = self.assemble(flag.clone(), beta_y, beta_u, &r, pairings, (consistent, printed))?;
        let general = self.flag_curvature_theorem(&flag)?;
        result.chain_residual = Some(
            (result.k_theorem_printed - general.k_theorem_printed)
                .abs()
                .max((result.k_theorem_consistent - general.k_theorem_consistent).abs()),
        );
        if !ctx.is_bi_invariant() {
            result.warnings.push(Warning::NotBiInvariant);
        }
        Ok(result)
    }

    fn assemble(
        &self,
        flag: Flag,
        beta_y: f64,
        beta_u: f64,
        r: &Vector,
        (r_dot_x, r_dot_u, r_dot_y): (f64, f64, f64),
        (consistent, printed): (f64, f64),
    ) -> Result<FlagCurvatureResult> {
        let k_direct = self.direct(&flag, r, None)?;
        let k_direct_fd = self.direct(&flag, r, Some(self.fd))?;
        let mut warnings = Vec::new();
        if beta_y < 0.0 {
            warnings.push(Warning::NegativeBeta);
        }
        Ok(FlagCurvatureResult {
            flag,
            beta_y,
            beta_u,
            r_dot_x,
            r_dot_u,
            r_dot_y,
            k_direct,
            k_direct_fd,
            k_theorem_consistent: consistent,
            k_theorem_printed: printed,
            residual_consistent_vs_direct: (consistent - k_direct).abs(),
            residual_printed_vs_direct: (printed - k_direct).abs(),
            chain_residual: None,
            warnings,
        })
    }

    /// Proxy for "Chern connection = Levi-Civita connection": `nabla X = 0`,
    /// evaluated with the Koszul connection. Only available when `h = 0`.
    pub fn berwald_hypothesis_check(&self, tol: f64) -> Check {
        if !self.ctx.split().is_trivial() {
            return Check::unchecked("hypothesis (nabla X = 0)", "nontrivial h: Koszul proxy unavailable");
        }
        let n = self.ctx.dim();
        let mut worst = 0.0_f64;
        for i in 0..n {
            let nab = self.ctx.koszul_nabla(&Vector::basis(n, i), &self.x).expect("trivial h");
            worst = worst.max(self.ctx.norm(&nab));
        }
        Check::residual("hypothesis (nabla X = 0)", worst, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LieAlgebra, ReductiveSplit};
    use crate::metric::InvariantMetric;
    use crate::report::Status;

    fn u2() -> KropinaStructure {
        let su2 = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
        let g = LieAlgebra::direct_sum(&LieAlgebra::abelian(1).unwrap(), &su2);
        let ctx = CurvatureContext::new(g, ReductiveSplit::trivial(4), InvariantMetric::identity(4)).unwrap();
        KropinaStructure::new(ctx, Vector::basis(4, 0)).unwrap()
    }

    fn b(i: usize) -> Vector {
        Vector::basis(4, i)
    }

    #[test]
    fn f_values() {
        let k = u2();
        assert_eq!(k.kropina_f(&b(0)).unwrap(), 1.0);
        let y = Vector::from([1.0, 0.0, 1.0, 0.0]).scale(core::f64::consts::FRAC_1_SQRT_2);
        assert!((k.kropina_f(&y).unwrap() - core::f64::consts::SQRT_2).abs() < 1e-15);
        let y2 = y.scale(2.0);
        assert!((k.kropina_f(&y2).unwrap() - 2.0 * k.kropina_f(&y).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_direction() {
        let k = u2();
        assert!(matches!(k.kropina_f(&b(1)), Err(Error::DegenerateDirection { .. })));
    }

    #[test]
    fn g_y_orthonormal_values() {
        let k = u2();
        assert_eq!(k.g_y_exact(&b(0), &b(1), &b(1)).unwrap(), 2.0);
        assert_eq!(k.g_y_exact(&b(0), &b(0), &b(1)).unwrap(), 0.0);
        let fd = k.g_y_fd(&b(0), &b(1), &b(1), FdOptions::default()).unwrap();
        assert!((fd - 2.0).abs() < 1e-6);
    }

    #[test]
    fn headline_flag() {
        let k = u2();
        let flag = Flag::new(Vector::from([1.0, 0.0, 1.0, 0.0]), b(1));
        let res = k.flag_curvature_theorem(&flag).unwrap();
        assert!((res.k_direct - 0.0625).abs() < 1e-12);
        assert!((res.k_theorem_consistent - 0.0625).abs() < 1e-12);
        assert!((res.k_theorem_printed - core::f64::consts::SQRT_2 / 16.0).abs() < 1e-12);
        let bi = k.flag_curvature_bi_invariant(&flag).unwrap();
        assert!(bi.chain_residual.unwrap() < 1e-12);
        assert!(bi.warnings.is_empty());
    }

    #[test]
    fn orthonormalize_keeps_flagpole() {
        let k = u2();
        let f = k
            .orthonormalize_flag(&Flag::new(b(1).scale(2.0), &b(1) + &b(2)))
            .unwrap();
        assert_eq!(f.y, b(1));
        assert!((&f.u - &b(2)).max_abs() < 1e-15);
        let dep = k.orthonormalize_flag(&Flag::new(b(1), b(1).scale(3.0)));
        assert!(matches!(dep, Err(Error::DegenerateFlag { .. })));
    }

    #[test]
    fn hypothesis_proxy() {
        let k = u2();
        assert_eq!(k.berwald_hypothesis_check(1e-9).status, Status::Pass);
        let su2 = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
        let ctx = CurvatureContext::new(su2, ReductiveSplit::trivial(3), InvariantMetric::identity(3)).unwrap();
        let k = KropinaStructure::new(ctx, Vector::basis(3, 0)).unwrap();
        let c = k.berwald_hypothesis_check(1e-9);
        assert_eq!(c.status, Status::Fail);
        assert!((c.residual - 0.5).abs() < 1e-12);
    }

    #[test]
    fn field_must_commute_with_h() {
        let su2 = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
        let ctx =
            CurvatureContext::new(su2, ReductiveSplit::new(3, &[2]).unwrap(), InvariantMetric::identity(3)).unwrap();
        assert!(matches!(
            KropinaStructure::new(ctx.clone(), Vector::basis(3, 0)),
            Err(Error::InvalidField(_))
        ));
        assert!(KropinaStructure::new(ctx, Vector::basis(3, 2)).is_err());
    }
}
