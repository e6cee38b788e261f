use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),

    #[error("invalid reductive split: {0}")]
    InvalidSplit(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("matrix is singular or not positive definite")]
    Singular,

    #[error("vector has h-components of size {residual:e} (tolerance {tolerance:e})")]
    OffComplement { residual: f64, tolerance: f64 },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid invariant vector field: {0}")]
    InvalidField(String),

    #[error("degenerate direction: |<y,X>| = {beta:e} below threshold {threshold:e}")]
    DegenerateDirection { beta: f64, threshold: f64 },

    #[error("degenerate flag: {what} = {value:e} below threshold {threshold:e}")]
    DegenerateFlag {
        what: &'static str,
        value: f64,
        threshold: f64,
    },

    #[error("operation requires a trivial isotropy subalgebra h")]
    NontrivialIsotropy,

    #[error("unknown model `{0}`")]
    UnknownModel(String),
}
