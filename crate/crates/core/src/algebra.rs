//! Finite-dimensional real Lie algebras given by structure constants, and
//! basis-aligned reductive splits `g = h + m`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::report::{Check, Report};

/// Coordinates of an element of `g` in the fixed basis `{b_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Checked constructor: rejects NaN and infinite coordinates.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().all(|c| c.is_finite()) {
            Ok(Self(coords))
        } else {
            Err(Error::NonFinite("vector"))
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The basis vector `b_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = 1.0;
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|x| s * x).collect())
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &Vector) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    /// Euclidean coordinate dot product (not a metric pairing).
    pub fn coord_dot(&self, other: &Vector) -> f64 {
        crate::linalg::dot(&self.0, &other.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            })
        }
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl core::ops::Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        Vector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

pub(crate) fn require_dim(v: &Vector, dim: usize) -> Result<()> {
    v.check_dim(dim)
}

/// A Lie algebra with dense structure constants `[b_i, b_j] = sum_k c[i][j][k] b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebra {
    dim: usize,
    structure: Vec<f64>,
    labels: Vec<String>,
}

impl LieAlgebra {
    /// Builds an algebra from the full `dim^3` table (index `(i*dim + j)*dim + k`).
    ///
    /// Antisymmetry must hold exactly.
    pub fn new(dim: usize, structure: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidStructure("dimension must be positive".into()));
        }
        if structure.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                found: structure.len(),
            });
        }
        if !structure.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite("structure constants"));
        }
        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    if structure[idx(i, j, k)] != -structure[idx(j, i, k)] {
                        return Err(Error::InvalidStructure(format!(
                            "antisymmetry violated: c[{i}][{j}][{k}] = {}, c[{j}][{i}][{k}] = {}",
                            structure[idx(i, j, k)],
                            structure[idx(j, i, k)]
                        )));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            structure,
            labels: default_labels(dim),
        })
    }

    /// Builds an algebra from bracket records `(i, j, k, value)` meaning
    /// `[b_i, b_j]` has `value` along `b_k`. The antisymmetric partner of each
    /// record is filled in; records that contradict each other are rejected.
    pub fn from_brackets(dim: usize, records: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let n3 = dim * dim * dim;
        let mut table = vec![0.0; n3];
        let mut seen = vec![false; n3];
        let idx = |i: usize, j: usize, k: usize| (i * dim + j) * dim + k;
        for &(i, j, k, v) in records {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::InvalidStructure(format!(
                    "index ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if i == j {
                if v != 0.0 {
                    return Err(Error::InvalidStructure(format!(
                        "[b{i}, b{i}] must vanish but c[{i}][{i}][{k}] = {v}"
                    )));
                }
                continue;
            }
            for (a, b, val) in [(i, j, v), (j, i, -v)] {
                let p = idx(a, b, k);
                if seen[p] && table[p] != val {
                    return Err(Error::InvalidStructure(format!(
                        "antisymmetry conflict at c[{i}][{j}][{k}]"
                    )));
                }
                seen[p] = true;
                table[p] = val;
            }
        }
        Self::new(dim, table)
    }

    pub fn abelian(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim * dim])
    }

    /// Direct sum `a + b` with `a`'s basis first.
    pub fn direct_sum(a: &LieAlgebra, b: &LieAlgebra) -> Self {
        let n = a.dim + b.dim;
        let mut table = vec![0.0; n * n * n];
        let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
        for (src, off) in [(a, 0), (b, a.dim)] {
            for i in 0..src.dim {
                for j in 0..src.dim {
                    for k in 0..src.dim {
                        table[idx(i + off, j + off, k + off)] = src.constant(i, j, k);
                    }
                }
            }
        }
        let mut labels = a.labels.clone();
        labels.extend(b.labels.iter().cloned());
        Self {
            dim: n,
            structure: table,
            labels,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero records with `i < j`, in lexicographic order.
    pub fn upper_records(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in 0..self.dim {
                    let c = self.constant(i, j, k);
                    if c != 0.0 {
                        out.push((i, j, k, c));
                    }
                }
            }
        }
        out
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().all(|&c| c == 0.0)
    }

    /// `[x, y]`.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        x.check_dim(self.dim)?;
        y.check_dim(self.dim)?;
        Ok(self.br(x, y))
    }

    /// Unchecked bracket for internal callers that already validated dimensions.
    pub(crate) fn br(&self, x: &Vector, y: &Vector) -> Vector {
        let n = self.dim;
        let mut out = vec![0.0; n];
        for i in 0..n {
            let xi = x.0[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = xi * y.0[j];
                if w == 0.0 || i == j {
                    continue;
                }
                let base = (i * n + j) * n;
                for (k, o) in out.iter_mut().enumerate() {
                    *o += w * self.structure[base + k];
                }
            }
        }
        Vector(out)
    }

    /// Matrix of `ad(x) = [x, .]` acting on coordinate columns.
    pub fn ad(&self, x: &Vector) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let col = self.br(x, &Vector::basis(n, j));
            for k in 0..n {
                m[(k, j)] = col.0[k];
            }
        }
        m
    }

    /// Largest Jacobi residual over all basis triples.
    pub fn check_jacobi(&self, tol: f64) -> Check {
        let n = self.dim;
        let mut worst = 0.0_f64;
        let mut at = None;
        let b = |i| Vector::basis(n, i);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (x, y, z) = (b(i), b(j), b(k));
                    let s1 = self.br(&x, &self.br(&y, &z));
                    let s2 = self.br(&y, &self.br(&z, &x));
                    let s3 = self.br(&z, &self.br(&x, &y));
                    let r = (&(&s1 + &s2) + &s3).max_abs();
                    if r > worst {
                        worst = r;
                        at = Some((i, j, k));
                    }
                }
            }
        }
        let check = Check::residual("jacobi", worst, tol);
        match (check.passed(), at) {
            (false, Some((i, j, k))) => check.with_detail(format!(
                "worst triple ({}, {}, {})",
                self.labels[i], self.labels[j], self.labels[k]
            )),
            _ => check,
        }
    }
}

fn default_labels(dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("b{i}")).collect()
}

/// Basis-aligned decomposition `g = h + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductiveSplit {
    dim: usize,
    h: Vec<usize>,
    m: Vec<usize>,
}

impl ReductiveSplit {
    pub fn new(dim: usize, h_indices: &[usize]) -> Result<Self> {
        let mut in_h = vec![false; dim];
        for &i in h_indices {
            if i >= dim {
                return Err(Error::InvalidSplit(format!(
                    "h index {i} out of range for dimension {dim}"
                )));
            }
            if in_h[i] {
                return Err(Error::InvalidSplit(format!("duplicate h index {i}")));
            }
            in_h[i] = true;
        }
        let h: Vec<usize> = (0..dim).filter(|&i| in_h[i]).collect();
        let m: Vec<usize> = (0..dim).filter(|&i| !in_h[i]).collect();
        if m.is_empty() {
            return Err(Error::InvalidSplit("m must be nonzero".into()));
        }
        Ok(Self { dim, h, m })
    }

    /// The split with `h = 0`, i.e. the Lie-group case.
    pub fn trivial(dim: usize) -> Self {
        Self {
            dim,
            h: Vec::new(),
            m: (0..dim).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h_indices(&self) -> &[usize] {
        &self.h
    }

    pub fn m_indices(&self) -> &[usize] {
        &self.m
    }

    pub fn is_trivial(&self) -> bool {
        self.h.is_empty()
    }

    pub fn project_m(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim)?;
        Ok(self.pm(x))
    }

    pub fn project_h(&self, x: &Vector) -> Result<Vector> {
        x.check_dim(self.dim)?;
        Ok(self.ph(x))
    }

    pub(crate) fn pm(&self, x: &Vector) -> Vector {
        let mut v = x.clone();
        for &i in &self.h {
            v.0[i] = 0.0;
        }
        v
    }

    pub(crate) fn ph(&self, x: &Vector) -> Vector {
        let mut v = x.clone();
        for &i in &self.m {
            v.0[i] = 0.0;
        }
        v
    }

    /// Largest `h`-coordinate of `x`.
    pub(crate) fn h_residual(&self, x: &Vector) -> f64 {
        self.h.iter().fold(0.0_f64, |m, &i| m.max(x.0[i].abs()))
    }

    /// Verifies that `h` is a subalgebra and that `[h, m]` lies in `m`.
    pub fn check_split(&self, algebra: &LieAlgebra, tol: f64) -> Report {
        let n = self.dim;
        let mut report = Report::new();
        if algebra.dim() != n {
            report.push(
                Check::residual("split dimension", f64::INFINITY, 0.0)
                    .with_detail(format!("algebra has dimension {}", algebra.dim())),
            );
            return report;
        }
        let mut worst_sub = (0.0_f64, None);
        let mut worst_inv = (0.0_f64, None);
        for &i in &self.h {
            for &j in &self.h {
                let r = self.pm(&algebra.br(&Vector::basis(n, i), &Vector::basis(n, j)));
                let res = r.max_abs();
                if res > worst_sub.0 {
                    worst_sub = (res, Some((i, j)));
                }
            }
            for &j in &self.m {
                let r = self.ph(&algebra.br(&Vector::basis(n, i), &Vector::basis(n, j)));
                let res = r.max_abs();
                if res > worst_inv.0 {
                    worst_inv = (res, Some((i, j)));
                }
            }
        }
        let labels = algebra.labels();
        for (name, (res, at)) in [("h subalgebra", worst_sub), ("[h,m] in m", worst_inv)] {
            let mut c = Check::residual(name, res, tol);
            if let (false, Some((i, j))) = (c.passed(), at) {
                c = c.with_detail(format!("worst pair ({}, {})", labels[i], labels[j]));
            }
            report.push(c);
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2() -> LieAlgebra {
        LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap()
    }

    #[test]
    fn su2_bracket_table() {
        let a = su2();
        let b = |i| Vector::basis(3, i);
        assert_eq!(a.bracket(&b(0), &b(1)).unwrap(), b(2));
        assert_eq!(a.bracket(&b(2), &b(1)).unwrap(), b(0).scale(-1.0));
        let x = Vector::from([0.3, -1.2, 2.5]);
        assert_eq!(a.bracket(&x, &x).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = su2();
        let err = a.bracket(&Vector::zeros(2), &Vector::zeros(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn antisymmetry_enforced() {
        let mut table = vec![0.0; 8];
        table[2] = 1.0; // c[0][1][0] without its partner c[1][0][0]
        assert!(matches!(LieAlgebra::new(2, table), Err(Error::InvalidStructure(_))));
        let conflict = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 0, 2, 1.0)]);
        assert!(matches!(conflict, Err(Error::InvalidStructure(_))));
        let consistent = LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 0, 2, -1.0)]);
        assert!(consistent.is_ok());
    }

    #[test]
    fn jacobi_reports() {
        assert_eq!(su2().check_jacobi(1e-9).residual, 0.0);
        assert!(LieAlgebra::abelian(4).unwrap().check_jacobi(1e-9).passed());
        // [b0, b1] = b2 + 0.1 b0 breaks Jacobi: J(b0,b1,b2) = 0.1 b1.
        let bad =
            LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (0, 1, 0, 0.1), (1, 2, 0, 1.0), (2, 0, 1, 1.0)]).unwrap();
        let c = bad.check_jacobi(1e-9);
        assert!(!c.passed());
        assert!((c.residual - 0.1).abs() < 1e-15);
        assert!(c.detail.unwrap().contains("b0"));
    }

    #[test]
    fn projections_mask_coordinates() {
        let s = ReductiveSplit::new(3, &[2]).unwrap();
        let x = Vector::from([1.0, 0.0, 2.0]);
        assert_eq!(s.project_m(&x).unwrap(), Vector::from([1.0, 0.0, 0.0]));
        assert_eq!(s.project_h(&x).unwrap(), Vector::from([0.0, 0.0, 2.0]));
        assert_eq!(s.project_m(&Vector::basis(3, 2)).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn split_checks() {
        let a = su2();
        assert!(ReductiveSplit::new(3, &[2]).unwrap().check_split(&a, 1e-9).passed());
        assert!(ReductiveSplit::trivial(3).check_split(&a, 1e-9).passed());
        let r = ReductiveSplit::new(3, &[0, 1]).unwrap().check_split(&a, 1e-9);
        assert!(!r.passed());
        assert_eq!(r.get("h subalgebra").unwrap().residual, 1.0);
    }

    #[test]
    fn split_rejects_bad_indices() {
        assert!(ReductiveSplit::new(3, &[3]).is_err());
        assert!(ReductiveSplit::new(3, &[1, 1]).is_err());
        assert!(ReductiveSplit::new(2, &[0, 1]).is_err());
    }
}
