//! The JSON model file format.
//!
//! ```json
//! {
//!   "name": "u2_central_kropina",
//!   "notes": "...",
//!   "dim": 4,
//!   "labels": ["b0", "b1", "b2", "b3"],
//!   "structure": [{"i": 1, "j": 2, "k": 3, "value": 1.0}, ...],
//!   "q0": [[1.0, 0.0, 0.0, 0.0], ...],
//!   "phi": [[1.0, 0.0, 0.0, 0.0], ...],
//!   "h_indices": [],
//!   "x": [1.0, 0.0, 0.0, 0.0]
//! }
//! ```
//!
//! Only `dim`, `structure` and `q0` are required. Structure records need only
//! `i < j`; the antisymmetric partner is implied. `phi` defaults to the
//! identity and `h_indices` to the empty list.

use std::fs;
use std::path::Path;

use kropina_core::linalg::Matrix;
use kropina_core::report::Report;
use kropina_core::{InvariantMetric, LieAlgebra, ModelSpec, ReductiveSplit, Vector, STRUCTURAL_TOLERANCE};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },

    #[error("validation failed:\n{0}")]
    Validation(Report),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StructureRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub structure: Vec<StructureRecord>,
    pub q0: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub h_indices: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
}

fn field(field: &'static str) -> impl Fn(kropina_core::Error) -> LoadError {
    move |e| LoadError::Field {
        field,
        message: e.to_string(),
    }
}

fn square(field_name: &'static str, rows: &[Vec<f64>], dim: usize) -> Result<Matrix, LoadError> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(LoadError::Field {
            field: field_name,
            message: format!("expected a {dim}x{dim} matrix"),
        });
    }
    Matrix::from_rows(rows).map_err(field(field_name))
}

impl ModelFile {
    pub fn from_spec(spec: &ModelSpec) -> Self {
        let n = spec.algebra.dim();
        let default_labels: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
        let labels = spec.algebra.labels().to_vec();
        Self {
            name: Some(spec.name.clone()),
            notes: (!spec.notes.is_empty()).then(|| spec.notes.clone()),
            dim: n,
            labels: (labels != default_labels).then_some(labels),
            structure: spec
                .algebra
                .upper_records()
                .into_iter()
                .map(|(i, j, k, value)| StructureRecord { i, j, k, value })
                .collect(),
            q0: spec.metric.q0().row_vecs(),
            phi: Some(spec.metric.phi().row_vecs()),
            h_indices: spec.split.h_indices().to_vec(),
            x: spec.x_field.as_ref().map(|x| x.as_slice().to_vec()),
        }
    }

    /// Builds the model without running the structural validators.
    pub fn into_spec(self) -> Result<ModelSpec, LoadError> {
        let n = self.dim;
        if n == 0 {
            return Err(LoadError::Field {
                field: "dim",
                message: "must be positive".into(),
            });
        }
        let records: Vec<_> = self.structure.iter().map(|r| (r.i, r.j, r.k, r.value)).collect();
        let mut algebra = LieAlgebra::from_brackets(n, &records).map_err(field("structure"))?;
        if let Some(labels) = self.labels {
            algebra = algebra.with_labels(labels).map_err(field("labels"))?;
        }
        let q0 = square("q0", &self.q0, n)?;
        let phi = match &self.phi {
            Some(rows) => square("phi", rows, n)?,
            None => Matrix::identity(n),
        };
        let metric = InvariantMetric::new(q0, phi).map_err(field("phi"))?;
        let split = ReductiveSplit::new(n, &self.h_indices).map_err(field("h_indices"))?;
        let x_field = match self.x {
            Some(x) if x.len() != n => {
                return Err(LoadError::Field {
                    field: "x",
                    message: format!("expected {n} coordinates, found {}", x.len()),
                })
            }
            Some(x) => Some(Vector::new(x).map_err(field("x"))?),
            None => None,
        };
        Ok(ModelSpec {
            name: self.name.unwrap_or_else(|| "unnamed".into()),
            algebra,
            split,
            metric,
            x_field,
            notes: self.notes.unwrap_or_default(),
        })
    }
}

/// Parses model text without validation.
pub fn parse_model(text: &str) -> Result<ModelSpec, LoadError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    file.into_spec()
}

/// Reads a model file without validation.
pub fn read_model(path: &Path) -> Result<ModelSpec, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model(&text)
}

/// Reads and validates a model file.
pub fn load_model(path: &Path) -> Result<ModelSpec, LoadError> {
    let spec = read_model(path)?;
    let report = spec.validate(STRUCTURAL_TOLERANCE);
    if !report.passed() {
        return Err(LoadError::Validation(report));
    }
    Ok(spec)
}

pub fn model_to_string(spec: &ModelSpec) -> String {
    let mut s = serde_json::to_string_pretty(&ModelFile::from_spec(spec)).expect("serializable");
    s.push('\n');
    s
}

pub fn save_model(spec: &ModelSpec, path: &Path) -> std::io::Result<()> {
    fs::write(path, model_to_string(spec))
}
