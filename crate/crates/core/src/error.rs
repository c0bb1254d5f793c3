use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no edges")]
    NoEdges,

    #[error("node {node} out of range (n = {n})")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("edge ({0}, {1}) is not in the graph")]
    UnknownEdge(usize, usize),

    #[error("isolated node {0} has no measure")]
    IsolatedNode(usize),

    #[error("alpha must be in [0,1]")]
    AlphaOutOfRange,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("ground distance undefined between {0} and {1}")]
    GroundDistanceUndefined(usize, usize),

    #[error("oracle scale exceeded (common denominator {0})")]
    OracleScaleExceeded(i64),

    #[error("arithmetic overflow while scaling masses")]
    Overflow,

    #[error("clustering undefined for node {0} of degree < 2")]
    ClusteringUndefined(usize),

    #[error("zero variance")]
    ZeroVariance,

    #[error("need at least {needed} paired values, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("exact hyperbolicity limited to {cap} nodes (graph has {n}); use sampled mode")]
    ExactCapExceeded { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("empty curvature map")]
    EmptyCurvatureMap,

    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    CoordinateOutOfRange { lat: f64, lon: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
