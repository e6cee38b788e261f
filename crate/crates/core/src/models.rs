//! Built-in example structures and random invariant metrics.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand_distr::{Distribution, StandardNormal, Uniform};

use crate::algebra::{LieAlgebra, ReductiveSplit, Vector};
use crate::curvature::{structural_report, CurvatureContext};
use crate::error::{Error, Result};
use crate::kropina::KropinaStructure;
use crate::linalg::{symmetric_eigen, Cholesky, Matrix};
use crate::metric::InvariantMetric;
use crate::report::Report;
use crate::sampling::seeded;

/// Names accepted by [`builtin`]. `abelian_<n>` works for any `1 <= n <= 16`.
pub const CATALOG: &[&str] = &[
    "su2_biinvariant",
    "u2_central_kropina",
    "s2_normal",
    "circle_su2_mod_u1",
    "abelian_2",
    "abelian_3",
];

const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    pub algebra: LieAlgebra,
    pub split: ReductiveSplit,
    pub metric: InvariantMetric,
    pub x_field: Option<Vector>,
    pub notes: String,
}

impl ModelSpec {
    /// Structural validators plus, when present, the invariants of `X`.
    pub fn validate(&self, tol: f64) -> Report {
        let mut report = structural_report(&self.algebra, &self.split, &self.metric, tol);
        if let Some(x) = &self.x_field {
            if report.passed() {
                if let Ok(ctx) = self.context_with_tolerance(tol) {
                    report.extend(KropinaStructure::field_report(&ctx, x, tol));
                }
            }
        }
        report
    }

    pub fn context(&self) -> Result<CurvatureContext> {
        CurvatureContext::new(self.algebra.clone(), self.split.clone(), self.metric.clone())
    }

    pub fn context_with_tolerance(&self, tol: f64) -> Result<CurvatureContext> {
        CurvatureContext::with_tolerance(self.algebra.clone(), self.split.clone(), self.metric.clone(), tol)
    }

    /// The Kropina structure, or `None` when the model carries no `X`.
    pub fn kropina(&self) -> Option<Result<KropinaStructure>> {
        let x = self.x_field.clone()?;
        Some(self.context().and_then(|ctx| KropinaStructure::new(ctx, x)))
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `su(2)` with `[b1,b2] = b3`, `[b2,b3] = b1`, `[b3,b1] = b2`; `q0 = I` is bi-invariant.
pub fn su2() -> LieAlgebra {
    LieAlgebra::from_brackets(3, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
        .and_then(|a| a.with_labels(labels(&["b1", "b2", "b3"])))
        .expect("su(2) table")
}

/// `R + su(2)` with the central direction first.
pub fn u2(central_label: &str) -> LieAlgebra {
    let line = LieAlgebra::abelian(1)
        .and_then(|a| a.with_labels(vec![central_label.to_string()]))
        .expect("line");
    LieAlgebra::direct_sum(&line, &su2())
}

pub fn builtin(name: &str) -> Result<ModelSpec> {
    let spec = match name {
        "su2_biinvariant" => ModelSpec {
            name: name.into(),
            algebra: su2(),
            split: ReductiveSplit::trivial(3),
            metric: InvariantMetric::identity(3),
            x_field: None,
            notes: "SU(2) with its bi-invariant metric; sectional curvature 1/4 on orthonormal pairs".into(),
        },
        "u2_central_kropina" => ModelSpec {
            name: name.into(),
            algebra: u2("b0"),
            split: ReductiveSplit::trivial(4),
            metric: InvariantMetric::identity(4),
            x_field: Some(Vector::basis(4, 0)),
            notes: "U(2) = R + su(2), bi-invariant, X central so nabla X = 0".into(),
        },
        "s2_normal" => ModelSpec {
            name: name.into(),
            algebra: su2(),
            split: ReductiveSplit::new(3, &[2])?,
            metric: InvariantMetric::identity(3),
            x_field: None,
            notes: "S^2 = SU(2)/U(1), normal metric, naturally reductive; no invariant X exists".into(),
        },
        "circle_su2_mod_u1" => ModelSpec {
            name: name.into(),
            algebra: u2("s"),
            split: ReductiveSplit::new(4, &[3])?,
            metric: InvariantMetric::diagonal(&[2.0, 1.5, 1.5, 1.0])?,
            x_field: Some(Vector::basis(4, 0)),
            notes: "(R + su(2))/u(1), phi = diag(2, 3/2, 3/2 | 1), X = s invariant".into(),
        },
        _ => return abelian_by_name(name),
    };
    Ok(spec)
}

fn abelian_by_name(name: &str) -> Result<ModelSpec> {
    let n: usize = name
        .strip_prefix("abelian_")
        .and_then(|s| s.parse().ok())
        .filter(|n| (1..=MAX_DIM).contains(n))
        .ok_or_else(|| Error::UnknownModel(name.into()))?;
    Ok(ModelSpec {
        name: name.into(),
        algebra: LieAlgebra::abelian(n)?,
        split: ReductiveSplit::trivial(n),
        metric: InvariantMetric::identity(n),
        x_field: Some(Vector::basis(n, 0)),
        notes: format!("flat R^{n}, X = b0; every curvature vanishes"),
    })
}

/// Random metric endomorphism with spectrum on `m` spanning `spectrum = (lo, hi)`.
///
/// `phi` is the identity on `h`, `<.,.>_0`-self-adjoint, and commutes with
/// `ad(h)` on `m`, so the induced metric is `Ad(h)`-invariant. The commutant is
/// computed numerically, which covers every isotypic block structure at once.
pub fn random_phi(
    seed: u64,
    algebra: &LieAlgebra,
    split: &ReductiveSplit,
    q0: &Matrix,
    spectrum: (f64, f64),
) -> Result<InvariantMetric> {
    let (lo, hi) = spectrum;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::InvalidMetric(format!("bad spectrum range [{lo}, {hi}]")));
    }
    let n = algebra.dim();
    let mi = split.m_indices();
    let k = mi.len();
    let chol = Cholesky::new(&q0.symmetrized().submatrix(mi))?;
    let l = chol.factor();
    let lt = l.transpose();
    let lt_inv = lt.inverse()?;

    // ad(h) on m in <.,.>_0-orthonormal coordinates: A~ = L^T A L^{-T}
    let ads: Vec<Matrix> = split
        .h_indices()
        .iter()
        .map(|&h| {
            let full = algebra.ad(&Vector::basis(n, h));
            lt.mul(&full.submatrix(mi)).mul(&lt_inv)
        })
        .collect();

    let params: Vec<(usize, usize)> = (0..k).flat_map(|i| (i..k).map(move |j| (i, j))).collect();
    let sym_basis = |p: usize| {
        let (i, j) = params[p];
        let mut e = Matrix::zeros(k, k);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        e
    };

    let kernel: Vec<Vec<f64>> = if ads.is_empty() {
        (0..params.len())
            .map(|p| {
                let mut v = vec![0.0; params.len()];
                v[p] = 1.0;
                v
            })
            .collect()
    } else {
        // Columns of M are vec([A~_h, E_p]) stacked over h; kernel of M^T M.
        let cols: Vec<Vec<f64>> = (0..params.len())
            .map(|p| {
                let e = sym_basis(p);
                let mut col = Vec::with_capacity(ads.len() * k * k);
                for a in &ads {
                    let c = a.mul(&e);
                    let d = e.mul(a);
                    for i in 0..k {
                        for j in 0..k {
                            col.push(c[(i, j)] - d[(i, j)]);
                        }
                    }
                }
                col
            })
            .collect();
        let np = params.len();
        let mut normal = Matrix::zeros(np, np);
        for p in 0..np {
            for q in p..np {
                let v = crate::linalg::dot(&cols[p], &cols[q]);
                normal[(p, q)] = v;
                normal[(q, p)] = v;
            }
        }
        let (vals, vecs) = symmetric_eigen(&normal);
        let top = vals.last().copied().unwrap_or(0.0).max(1.0);
        (0..np)
            .filter(|&c| vals[c] <= 1e-10 * top)
            .map(|c| (0..np).map(|r| vecs[(r, c)]).collect())
            .collect()
    };

    let mut rng = seeded(seed);
    let mut s = Matrix::zeros(k, k);
    for kv in &kernel {
        let g: f64 = StandardNormal.sample(&mut rng);
        for (p, w) in kv.iter().enumerate() {
            let (i, j) = params[p];
            s[(i, j)] += g * w;
            if i != j {
                s[(j, i)] += g * w;
            }
        }
    }
    let (vals, _) = symmetric_eigen(&s);
    let (smin, smax) = (vals[0], vals[k - 1]);
    let spread = smax - smin;
    let mut phi_t = Matrix::zeros(k, k);
    if spread <= 1e-12 * smax.abs().max(1.0) || hi == lo {
        let c = if hi == lo {
            lo
        } else {
            Uniform::new_inclusive(lo, hi)
                .map_err(|_| Error::InvalidMetric("bad spectrum range".into()))?
                .sample(&mut rng)
        };
        for i in 0..k {
            phi_t[(i, i)] = c;
        }
    } else {
        for i in 0..k {
            for j in 0..k {
                let id = if i == j { 1.0 } else { 0.0 };
                phi_t[(i, j)] = lo * id + (hi - lo) * (s[(i, j)] - smin * id) / spread;
            }
        }
    }
    // back to basis coordinates: phi_m = L^{-T} phi~ L^T
    let phi_m = lt_inv.mul(&phi_t).mul(&lt);
    let mut phi = Matrix::identity(n);
    for (a, &i) in mi.iter().enumerate() {
        for (b, &j) in mi.iter().enumerate() {
            phi[(i, j)] = phi_m[(a, b)];
        }
    }
    InvariantMetric::new(q0.clone(), phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::STRUCTURAL_TOLERANCE;

    #[test]
    fn catalog_validates() {
        for name in CATALOG {
            let spec = builtin(name).unwrap();
            let r = spec.validate(STRUCTURAL_TOLERANCE);
            assert!(r.passed(), "{name}: {r}");
            if let Some(k) = spec.kropina() {
                k.unwrap();
            }
        }
    }

    #[test]
    fn unknown_names() {
        assert_eq!(builtin("nope"), Err(Error::UnknownModel("nope".into())));
        assert!(builtin("abelian_0").is_err());
        assert!(builtin("abelian_17").is_err());
        assert_eq!(builtin("abelian_7").unwrap().algebra.dim(), 7);
    }

    #[test]
    fn random_phi_is_seeded_and_valid() {
        let spec = builtin("circle_su2_mod_u1").unwrap();
        let q0 = Matrix::identity(4);
        let a = random_phi(7, &spec.algebra, &spec.split, &q0, (0.5, 3.0)).unwrap();
        let b = random_phi(7, &spec.algebra, &spec.split, &q0, (0.5, 3.0)).unwrap();
        assert_eq!(a, b);
        assert!(a.check_metric(&spec.algebra, &spec.split, 1e-9).passed());
        let id = random_phi(3, &spec.algebra, &spec.split, &q0, (1.0, 1.0)).unwrap();
        assert!(id.phi_is_identity(1e-14));
    }
}
