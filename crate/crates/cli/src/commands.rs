//! Command workflows, independent of argument parsing and output formatting.

use std::fmt;
use std::io::Write;
use std::path::Path;

use kropina_core::kropina::FdOptions;
use kropina_core::models::builtin;
use kropina_core::report::{Check, Report};
use kropina_core::sampling::{admissible_flag, seeded, unit_direction};
use kropina_core::{
    CurvatureContext, Error, Flag, FlagCurvatureResult, KropinaStructure, ModelSpec, Vector, STRUCTURAL_TOLERANCE,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::model_file::{read_model, LoadError};

/// Process exit statuses. Usage errors (2) are produced by the argument parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Io = 1,
    Usage = 2,
    Parse = 3,
    Validation = 4,
    Degenerate = 5,
    Tolerance = 6,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        let exit = match &e {
            LoadError::Io { .. } => Exit::Io,
            LoadError::Parse { .. } | LoadError::Field { .. } => Exit::Parse,
            LoadError::Validation(_) => Exit::Validation,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match &e {
            Error::DegenerateDirection { .. } | Error::DegenerateFlag { .. } => Exit::Degenerate,
            _ => Exit::Validation,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::new(Exit::Io, e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::new(Exit::Io, e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// A path if such a file exists, otherwise a built-in model name.
pub fn resolve_model(arg: &str) -> CliResult<ModelSpec> {
    let path = Path::new(arg);
    if path.exists() {
        return Ok(read_model(path)?);
    }
    builtin(arg).map_err(|_| {
        CliError::new(
            Exit::Io,
            format!("`{arg}` is neither a readable file nor a built-in model"),
        )
    })
}

/// Replaces the model's invariant field.
pub fn with_x(mut spec: ModelSpec, x: Option<Vec<f64>>) -> CliResult<ModelSpec> {
    if let Some(x) = x {
        let n = spec.algebra.dim();
        if x.len() != n {
            return Err(CliError::new(
                Exit::Parse,
                format!("--x: expected {n} coordinates, found {}", x.len()),
            ));
        }
        spec.x_field = Some(Vector::new(x)?);
    }
    Ok(spec)
}

fn kropina(spec: &ModelSpec, step: Option<f64>) -> CliResult<KropinaStructure> {
    let ks = spec.kropina().ok_or_else(|| {
        CliError::new(
            Exit::Validation,
            format!("model `{}` has no invariant field x", spec.name),
        )
    })??;
    Ok(match step {
        Some(h) => ks.with_fd_options(fd_options(Some(h))),
        None => ks,
    })
}

fn fd_options(step: Option<f64>) -> FdOptions {
    let mut o = FdOptions::default();
    if let Some(h) = step {
        o.rel_step = h;
    }
    o
}

pub const HYPOTHESIS: &str = "hypothesis (nabla X = 0)";

pub struct ValidateOutcome {
    pub model: String,
    /// Checks that decide the exit status.
    pub report: Report,
    /// Reported but never gating.
    pub informational: Report,
}

impl ValidateOutcome {
    pub fn exit(&self) -> Exit {
        if self.report.passed() {
            Exit::Success
        } else {
            Exit::Validation
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model,
            "passed": self.report.passed(),
            "checks": crate::render::report_json(&self.report),
            "informational": crate::render::report_json(&self.informational),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("model {}\n{}", self.model, self.report);
        if !self.informational.checks.is_empty() {
            s.push_str(&format!("informational:\n{}", self.informational));
        }
        s.push_str(if self.report.passed() {
            "result: PASS\n"
        } else {
            "result: FAIL\n"
        });
        s
    }
}

pub fn validate(spec: &ModelSpec, tol: f64) -> CliResult<ValidateOutcome> {
    let mut report = spec.validate(tol);
    let mut informational = Report::new();
    if report.passed() {
        let ctx = spec.context_with_tolerance(tol)?;
        informational.push(ctx.naturally_reductive_check(tol));
        match &spec.x_field {
            Some(x) => report.push(KropinaStructure::new(ctx, x.clone())?.berwald_hypothesis_check(tol)),
            None => report.push(Check::unchecked(HYPOTHESIS, "model has no invariant field x")),
        }
    } else {
        report.push(Check::unchecked(HYPOTHESIS, "structural checks failed"));
    }
    Ok(ValidateOutcome {
        model: spec.name.clone(),
        report,
        informational,
    })
}

pub struct FlagOutcome {
    pub general: FlagCurvatureResult,
    /// The bi-invariant route, for bi-invariant models.
    pub bi_invariant: Option<FlagCurvatureResult>,
}

pub fn flag(spec: &ModelSpec, y: Vec<f64>, u: Vec<f64>, step: Option<f64>) -> CliResult<FlagOutcome> {
    let ks = kropina(spec, step)?;
    let n = spec.algebra.dim();
    for (name, v) in [("--y", &y), ("--u", &u)] {
        if v.len() != n {
            return Err(CliError::new(
                Exit::Parse,
                format!("{name}: expected {n} coordinates, found {}", v.len()),
            ));
        }
    }
    let flag = Flag::new(Vector::new(y)?, Vector::new(u)?);
    let general = ks.flag_curvature_theorem(&flag)?;
    let bi_invariant = if ks.context().is_bi_invariant() {
        Some(ks.flag_curvature_bi_invariant(&flag)?)
    } else {
        None
    };
    Ok(FlagOutcome { general, bi_invariant })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub seed: u64,
    pub y: Vector,
    pub u: Vector,
    pub beta_y: f64,
    pub k_direct: f64,
    pub k_theorem_consistent: f64,
    pub k_theorem_printed: f64,
    pub residual_consistent_vs_direct: f64,
    pub residual_printed_vs_direct: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub dim: usize,
    pub rows: Vec<ScanRow>,
}

/// Row `i` draws its flag from seed `seed + i` (wrapping), so rows are
/// independent of evaluation order and of the sample count.
pub fn scan(spec: &ModelSpec, samples: usize, seed: u64) -> CliResult<Scan> {
    let ks = kropina(spec, None)?;
    let rows = (0..samples)
        .into_par_iter()
        .map(|i| {
            let row_seed = seed.wrapping_add(i as u64);
            let flag = admissible_flag(&ks, &mut seeded(row_seed), 0.0)?;
            let r = ks.flag_curvature_theorem(&flag)?;
            Ok(ScanRow {
                seed: row_seed,
                y: r.flag.y,
                u: r.flag.u,
                beta_y: r.beta_y,
                k_direct: r.k_direct,
                k_theorem_consistent: r.k_theorem_consistent,
                k_theorem_printed: r.k_theorem_printed,
                residual_consistent_vs_direct: r.residual_consistent_vs_direct,
                residual_printed_vs_direct: r.residual_printed_vs_direct,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(Scan {
        dim: spec.algebra.dim(),
        rows,
    })
}

/// Shortest round-trip representation; scientific outside `[1e-4, 1e15)`.
fn csv_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

impl Scan {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["seed".to_string()];
        h.extend((0..self.dim).map(|i| format!("y{i}")));
        h.extend((0..self.dim).map(|i| format!("u{i}")));
        h.extend(
            [
                "beta_y",
                "k_direct",
                "k_theorem_consistent",
                "k_theorem_printed",
                "residual_consistent_vs_direct",
                "residual_printed_vs_direct",
            ]
            .map(String::from),
        );
        h
    }

    pub fn max_residuals(&self) -> (f64, f64) {
        self.rows.iter().fold((0.0, 0.0), |(c, p), r| {
            (
                c.max(r.residual_consistent_vs_direct),
                p.max(r.residual_printed_vs_direct),
            )
        })
    }

    pub fn summary(&self) -> String {
        let (c, p) = self.max_residuals();
        format!(
            "{} rows; max residual_consistent_vs_direct {c:.3e}; max residual_printed_vs_direct {p:.3e}",
            self.rows.len()
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(self.header())?;
        for r in &self.rows {
            let mut rec = vec![r.seed.to_string()];
            rec.extend(r.y.as_slice().iter().map(|&x| csv_float(x)));
            rec.extend(r.u.as_slice().iter().map(|&x| csv_float(x)));
            rec.extend(
                [
                    r.beta_y,
                    r.k_direct,
                    r.k_theorem_consistent,
                    r.k_theorem_printed,
                    r.residual_consistent_vs_direct,
                    r.residual_printed_vs_direct,
                ]
                .map(csv_float),
            );
            out.write_record(rec)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let (c, p) = self.max_residuals();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "seed": r.seed,
                    "y": r.y.as_slice(),
                    "u": r.u.as_slice(),
                    "beta_y": r.beta_y,
                    "k_direct": r.k_direct,
                    "k_theorem_consistent": r.k_theorem_consistent,
                    "k_theorem_printed": r.k_theorem_printed,
                    "residual_consistent_vs_direct": r.residual_consistent_vs_direct,
                    "residual_printed_vs_direct": r.residual_printed_vs_direct,
                })
            })
            .collect();
        json!({
            "columns": self.header(),
            "rows": rows,
            "max_residual_consistent_vs_direct": c,
            "max_residual_printed_vs_direct": p,
        })
    }
}

/// Default tolerances of the oracle pairings.
pub mod tolerances {
    pub const FUNDAMENTAL_TENSOR: f64 = 1e-6;
    pub const PUTTMANN_KOSZUL: f64 = 1e-9;
    pub const REDUCTION: f64 = 1e-10;
    pub const CHAIN: f64 = 1e-10;
    pub const CONSISTENT: f64 = 1e-8;
    pub const DIRECT_FD: f64 = 1e-6;
}

/// Flagpoles fed to finite differences keep `|<Y,X>| >= FD_MARGIN |X|`.
pub const FD_MARGIN: f64 = 0.05;

pub const PRINTED_VS_DIRECT: &str = "printed vs direct";

pub struct CompareOutcome {
    pub model: String,
    pub report: Report,
    /// Reported but not gating.
    pub informational: Report,
}

impl CompareOutcome {
    pub fn exit(&self) -> Exit {
        if self.report.passed() {
            Exit::Success
        } else {
            Exit::Tolerance
        }
    }

    /// The failing pairing with the largest residual-to-tolerance ratio.
    pub fn worst(&self) -> Option<&Check> {
        self.report.failures().max_by(|a, b| {
            let ra = a.residual / a.threshold.max(f64::MIN_POSITIVE);
            let rb = b.residual / b.threshold.max(f64::MIN_POSITIVE);
            ra.partial_cmp(&rb).unwrap_or(std::cmp::Ordering::Greater)
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "model": self.model,
            "passed": self.report.passed(),
            "pairings": crate::render::report_json(&self.report),
            "informational": crate::render::report_json(&self.informational),
            "worst": self.worst().map(|c| c.name.clone()),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("model {}\n{}", self.model, self.report);
        if !self.informational.checks.is_empty() {
            s.push_str(&format!("informational:\n{}", self.informational));
        }
        match self.worst() {
            None => s.push_str("result: PASS\n"),
            Some(w) => s.push_str(&format!("result: FAIL (worst pairing: {})\n", w.name)),
        }
        s
    }
}

fn quads(ctx: &CurvatureContext, samples: usize, seed: u64) -> Vec<[Vector; 4]> {
    (0..samples)
        .map(|i| {
            let mut rng = seeded(seed.wrapping_add(i as u64));
            [(); 4].map(|_| unit_direction(ctx, &mut rng))
        })
        .collect()
}

fn worst<I: IntoIterator<Item = CliResult<f64>>>(it: I) -> CliResult<f64> {
    it.into_iter().try_fold(0.0_f64, |w, r| r.map(|r| w.max(r)))
}

/// Runs every oracle pairing that applies to the model. `tolerance`
/// overrides every default and also makes the printed-variant pairing gating.
pub fn compare(
    spec: &ModelSpec,
    samples: usize,
    seed: u64,
    tolerance: Option<f64>,
    step: Option<f64>,
) -> CliResult<CompareOutcome> {
    let tol = |default: f64| tolerance.unwrap_or(default);
    let ctx = spec.context()?;
    let qs = quads(&ctx, samples, seed);
    let mut report = Report::new();
    let mut informational = Report::new();

    if ctx.split().is_trivial() {
        let w = worst(qs.iter().map(|[u, y, w, _]| {
            let oracle = ctx.inner(&ctx.oracle_r(u, y)?, w);
            let closed = ctx.puttmann_pairing(u, y, y, w)?;
            Ok((oracle - closed).abs() / closed.abs().max(1.0))
        }))?;
        report.push(Check::residual(
            "Puttmann vs Koszul",
            w,
            tol(tolerances::PUTTMANN_KOSZUL),
        ));
    }
    if ctx.naturally_reductive_check(STRUCTURAL_TOLERANCE).passed() {
        let w = worst(
            qs.iter()
                .map(|[u, y, _, _]| Ok((&ctx.naturally_reductive_r(u, y)? - &ctx.curvature_vector(u, y)?).max_abs())),
        )?;
        report.push(Check::residual(
            "naturally reductive vs Puttmann",
            w,
            tol(tolerances::REDUCTION),
        ));
    }
    if ctx.is_bi_invariant() {
        let w = worst(qs.iter().map(|[u, y, _, _]| {
            let bi = ctx.bi_invariant_r(u, y)?;
            let p = (&bi - &ctx.curvature_vector(u, y)?).max_abs();
            let k = (&bi - &ctx.oracle_r(u, y)?).max_abs();
            Ok(p.max(k))
        }))?;
        report.push(Check::residual(
            "bi-invariant vs Puttmann and Koszul",
            w,
            tol(tolerances::REDUCTION),
        ));
    }

    if spec.x_field.is_some() && ctx.split().m_indices().len() >= 2 {
        let ks = kropina(spec, step)?;
        let fd = fd_options(step);
        let mut fd_worst = 0.0_f64;
        let mut cons = 0.0_f64;
        let mut printed = 0.0_f64;
        let mut direct_fd = 0.0_f64;
        let mut chain = 0.0_f64;
        for i in 0..samples {
            let mut rng = seeded(seed.wrapping_add(i as u64));
            let f = admissible_flag(&ks, &mut rng, FD_MARGIN)?;
            let (v, w) = (unit_direction(&ctx, &mut rng), unit_direction(&ctx, &mut rng));
            let exact = ks.g_y_exact(&f.y, &v, &w)?;
            let approx = ks.g_y_fd(&f.y, &v, &w, fd)?;
            let scale = exact
                .abs()
                .max((ks.g_y_exact(&f.y, &v, &v)? * ks.g_y_exact(&f.y, &w, &w)?).abs().sqrt());
            fd_worst = fd_worst.max((exact - approx).abs() / scale.max(f64::MIN_POSITIVE));

            let r = ks.flag_curvature_theorem(&f)?;
            cons = cons.max(r.residual_consistent_vs_direct);
            printed = printed.max(r.residual_printed_vs_direct);
            direct_fd = direct_fd.max((r.k_direct - r.k_direct_fd).abs() / r.k_direct.abs().max(1.0));
            if ctx.is_bi_invariant() {
                chain = chain.max(ks.flag_curvature_bi_invariant(&f)?.chain_residual.unwrap_or(0.0));
            }
        }
        report.push(Check::residual(
            "g_Y exact vs finite differences",
            fd_worst,
            tol(tolerances::FUNDAMENTAL_TENSOR),
        ));
        report.push(Check::residual(
            "direct vs direct with FD g_Y",
            direct_fd,
            tol(tolerances::DIRECT_FD),
        ));
        if ctx.is_bi_invariant() {
            report.push(Check::residual(
                "bi-invariant vs general closed form",
                chain,
                tol(tolerances::CHAIN),
            ));
        }
        report.push(Check::residual(
            "consistent vs direct",
            cons,
            tol(tolerances::CONSISTENT),
        ));
        match tolerance {
            Some(t) => report.push(Check::residual(PRINTED_VS_DIRECT, printed, t)),
            None => informational.push(
                Check::residual(PRINTED_VS_DIRECT, printed, tolerances::CONSISTENT)
                    .with_detail("not gating unless --tolerance is given"),
            ),
        }
    }
    Ok(CompareOutcome {
        model: spec.name.clone(),
        report,
        informational,
    })
}
