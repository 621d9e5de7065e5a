use serde::Serialize;
use thiserror::Error;

use crate::little_disks::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("arity error: {0}")]
    Arity(String),

    #[error("degenerate configuration: points {i} and {j} coincide")]
    Degenerate { i: usize, j: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid disk configuration: {}", describe(.0))]
    InvalidConfiguration(Vec<Violation>),

    #[error("convex blend at delta={delta} is not a disk configuration: {}", describe(.violations))]
    BlendInvalid {
        delta: f64,
        violations: Vec<Violation>,
    },

    #[error("chart domain exceeded: points {i} and {j} collide (distance {distance:e})")]
    ChartDomain { i: usize, j: usize, distance: f64 },

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("edge {0} is not an internal edge")]
    NotInternalEdge(usize),

    #[error("enumeration bound exceeded: n = {n} > {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("conjugation symmetry violated: {0}")]
    Symmetry(String),

    #[error("mixed scale vector: some edges at zero scale and some positive")]
    MixedScales,

    #[error("sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: usize },

    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Arity(_) => "arity",
            Error::Degenerate { .. } => "degenerate",
            Error::Parameter(_) => "parameter",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::InvalidConfiguration(_) => "invalid_configuration",
            Error::BlendInvalid { .. } => "blend_invalid",
            Error::ChartDomain { .. } => "chart_domain",
            Error::InvalidTree(_) => "invalid_tree",
            Error::NotInternalEdge(_) => "not_internal_edge",
            Error::BoundExceeded { .. } => "bound_exceeded",
            Error::Symmetry(_) => "symmetry",
            Error::MixedScales => "mixed_scales",
            Error::SamplingExhausted { .. } => "sampling_exhausted",
            Error::Format(_) => "format",
        }
    }

    pub fn report(&self) -> ErrorReport {
        let violations = match self {
            Error::InvalidConfiguration(v) | Error::BlendInvalid { violations: v, .. } => v.clone(),
            _ => Vec::new(),
        };
        ErrorReport {
            error: self.kind(),
            message: self.to_string(),
            violations,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

fn describe(violations: &[Violation]) -> String {
    let shown: Vec<String> = violations.iter().take(4).map(|v| v.to_string()).collect();
    let mut s = shown.join("; ");
    if violations.len() > 4 {
        s.push_str(&format!("; ... ({} total)", violations.len()));
    }
    s
}
