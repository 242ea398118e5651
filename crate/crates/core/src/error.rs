//! Crate-wide error type.

use crate::model::SolveReport;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("net {net}: unknown chiplet endpoint {endpoint}")]
    UnknownEndpoint { net: usize, endpoint: usize },

    #[error("placement covers {found} chiplets, instance has {expected}")]
    PlacementMismatch { expected: usize, found: usize },

    #[error("empty placement")]
    EmptyPlacement,

    #[error("negative die area {0} cm^2")]
    NegativeArea(f64),

    #[error("yield parameter `{0}` must be in (0, 1]")]
    ZeroYield(&'static str),

    #[error("warpage argument x = {x} outside [0, {l}]")]
    WarpageDomain { x: f64, l: f64 },

    #[error("placement spans {span} um, exceeding substrate half-length {l} um on {axis} axis")]
    SubstrateExceeded { axis: char, span: f64, l: f64 },

    #[error("hierarchy parse error at `{path}`: {reason}")]
    HierarchyParse { path: String, reason: String },

    #[error("leaf `{name}` has area {area} above the partition upper bound {a_max}")]
    OversizedLeaf { name: String, area: f64, a_max: f64 },

    #[error("frequency matrix is {found}x{found}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("relative order constraint graph contains a cycle")]
    CyclicOrder,

    #[error("exact solver limited to {max} chiplets, instance has {n}")]
    ExactTooLarge { n: usize, max: usize },

    #[error("warm start placement has {violations} constraint violations")]
    InfeasibleWarmStart { violations: usize },

    #[error("no feasible solution found within the search budget")]
    NoFeasibleSolution { best: Box<SolveReport> },

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
