#![allow(dead_code)]

use kropina_core::linalg::Matrix;
use kropina_core::models::{builtin, random_phi, su2, u2};
use kropina_core::{CurvatureContext, KropinaStructure, LieAlgebra, ReductiveSplit};

/// Kropina models of the catalog, built and validated.
pub fn kropina_catalog() -> Vec<(String, KropinaStructure)> {
    kropina_core::models::CATALOG
        .iter()
        .filter_map(|name| {
            let spec = builtin(name).unwrap();
            spec.kropina().map(|k| (name.to_string(), k.unwrap()))
        })
        .filter(|(_, k)| k.context().split().m_indices().len() >= 2)
        .collect()
}

/// Lie-group contexts (trivial h) with seeded random SPD phi.
pub fn random_group_contexts(seeds: std::ops::Range<u64>) -> Vec<(String, CurvatureContext)> {
    let mut out = Vec::new();
    for seed in seeds {
        for (name, algebra) in [("su2", su2()), ("u2", u2("b0"))] {
            let n = algebra.dim();
            let split = ReductiveSplit::trivial(n);
            let metric = random_phi(seed, &algebra, &split, &Matrix::identity(n), (0.3, 4.0)).unwrap();
            let ctx = CurvatureContext::new(algebra, split, metric).unwrap();
            out.push((format!("{name}/phi#{seed}"), ctx));
        }
    }
    out
}

/// Bi-invariant (phi = I, h = 0) contexts.
pub fn bi_invariant_contexts() -> Vec<(String, CurvatureContext)> {
    let algebras: Vec<(&str, LieAlgebra)> = vec![
        ("su2", su2()),
        ("u2", u2("b0")),
        ("su2+su2", LieAlgebra::direct_sum(&su2(), &su2())),
        ("abelian_3", LieAlgebra::abelian(3).unwrap()),
    ];
    algebras
        .into_iter()
        .map(|(name, a)| {
            let n = a.dim();
            let ctx = CurvatureContext::new(
                a,
                ReductiveSplit::trivial(n),
                kropina_core::InvariantMetric::identity(n),
            )
            .unwrap();
            (name.to_string(), ctx)
        })
        .collect()
}

/// Homogeneous contexts with nontrivial h and random invariant phi.
pub fn random_homogeneous_contexts(seeds: std::ops::Range<u64>) -> Vec<(String, CurvatureContext)> {
    let spec = builtin("circle_su2_mod_u1").unwrap();
    seeds
        .map(|seed| {
            let metric = random_phi(seed, &spec.algebra, &spec.split, &Matrix::identity(4), (0.5, 3.0)).unwrap();
            let ctx = CurvatureContext::new(spec.algebra.clone(), spec.split.clone(), metric).unwrap();
            (format!("circle/phi#{seed}"), ctx)
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}
