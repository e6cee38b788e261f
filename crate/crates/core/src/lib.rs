//! Lie-algebra curvature machinery for invariant Kropina metrics on compact
//! homogeneous spaces `G/H`.
//!
//! Everything is computed at the tangent space of the origin coset, which is
//! identified with the reductive complement `m` of a basis-aligned split
//! `g = h + m`. The crate is `no_std` and only needs `alloc`.
//!
//! Layout:
//! - [`algebra`]: brackets from structure constants, reductive splits.
//! - [`metric`]: reference metric, metric endomorphism, `B+`/`B-`.
//! - [`curvature`]: Püttmann pairing, closed-form curvature vectors and a
//!   Koszul-formula Levi-Civita oracle.
//! - [`kropina`]: the Kropina metric, its fundamental tensor and flag curvature.
//! - [`models`]: built-in example structures and random invariant metrics.
//! - [`sampling`]: seeded random directions and flags.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod curvature;
pub mod error;
pub mod kropina;
pub mod linalg;
pub mod metric;
pub mod models;
pub mod report;
pub mod sampling;

pub use algebra::{LieAlgebra, ReductiveSplit, Vector};
pub use curvature::CurvatureContext;
pub use error::{Error, Result};
pub use kropina::{Flag, FlagCurvatureResult, KropinaStructure};
pub use metric::InvariantMetric;
pub use models::ModelSpec;
pub use report::{Check, Report, Status};

/// Default absolute tolerance for structural residuals (Jacobi, split, metric invariants).
pub const STRUCTURAL_TOLERANCE: f64 = 1e-9;
