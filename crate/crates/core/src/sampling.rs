//! Seeded random directions and flags in `m`.
//!
//! Directions are uniform on the `<.,.>`-unit sphere of `m`: standard Gaussian
//! coordinates in a `<.,.>`-orthonormal basis, normalized.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::Vector;
use crate::curvature::CurvatureContext;
use crate::error::{Error, Result};
use crate::kropina::{Flag, KropinaStructure, DEGENERACY_THRESHOLD};

const MAX_ATTEMPTS: usize = 100_000;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A vector in `m` whose coordinates in a `<.,.>`-orthonormal basis are i.i.d. standard normal.
pub fn gaussian_m<R: Rng + ?Sized>(ctx: &CurvatureContext, rng: &mut R) -> Vector {
    let k = ctx.split().m_indices().len();
    let z: alloc::vec::Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
    let coords = ctx.gram_m().solve_upper(&z);
    let mut v = Vector::zeros(ctx.dim()).into_inner();
    for (&i, c) in ctx.split().m_indices().iter().zip(coords) {
        v[i] = c;
    }
    Vector::from(v)
}

/// Uniform direction on the `<.,.>`-unit sphere of `m`.
pub fn unit_direction<R: Rng + ?Sized>(ctx: &CurvatureContext, rng: &mut R) -> Vector {
    loop {
        let v = gaussian_m(ctx, rng);
        let n = ctx.norm(&v);
        if n > 1e-12 {
            return v.scale(1.0 / n);
        }
    }
}

/// Random `<.,.>`-orthonormal flag with `|<Y,X>| >= min_cos * |X|` (at least
/// the degeneracy threshold), by rejection sampling of the flagpole.
pub fn admissible_flag<R: Rng + ?Sized>(ks: &KropinaStructure, rng: &mut R, min_cos: f64) -> Result<Flag> {
    let ctx = ks.context();
    if ctx.split().m_indices().len() < 2 {
        return Err(Error::DegenerateFlag {
            what: "dim m",
            value: ctx.split().m_indices().len() as f64,
            threshold: 2.0,
        });
    }
    let x_norm = ctx.norm(ks.x_field());
    let cutoff = min_cos.max(DEGENERACY_THRESHOLD) * x_norm;
    for _ in 0..MAX_ATTEMPTS {
        let y = unit_direction(ctx, rng);
        if ks.beta(&y).abs() < cutoff {
            continue;
        }
        let u = unit_direction(ctx, rng);
        if let Ok(flag) = ks.orthonormalize_flag(&Flag::new(y, u)) {
            return Ok(flag);
        }
    }
    Err(Error::DegenerateFlag {
        what: "rejection sampling",
        value: MAX_ATTEMPTS as f64,
        threshold: cutoff,
    })
}
