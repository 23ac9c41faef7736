use thiserror::Error;

use crate::drawing::VertexId;
use crate::goodness::GoodnessReport;

#[derive(Debug, Error)]
pub enum Error {
    /// The drawing or layout is not well formed (wrong counts, mismatched endpoints,
    /// duplicate consecutive polyline points, ...). Distinct from goodness violations.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("drawing is not a good drawing ({} violation(s))", .0.violations.len())]
    NotGood(Box<GoodnessReport>),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("reference point lies on the drawing")]
    AmbiguousFace,

    #[error("vertex {0} is not in the drawing")]
    UnknownVertex(VertexId),

    #[error("realization does not match the combinatorial crossing count ({combinatorial} vs {realized}) at resolution {resolution}")]
    Fidelity {
        combinatorial: u64,
        realized: u64,
        resolution: u32,
    },

    #[error("certification failed: {0}")]
    Certification(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
