use crate::lattice::Side;

/// Errors raised by the numerical core.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid block partition: {0}")]
    Partition(String),

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("expected a {expected}-side field, got a {found}-side field")]
    Side { expected: Side, found: Side },

    #[error("fields are sampled on different grids")]
    GridMismatch,

    #[error("axis {axis} is out of range for a {dims}-dimensional grid")]
    Axis { axis: usize, dims: usize },

    #[error("invalid cone: {0}")]
    Cone(String),

    #[error("shift of {shift} nodes along axis {axis} is not an integer; use interpolate mode")]
    NonIntegerShift { axis: usize, shift: f64 },

    #[error("invalid symbol: {0}")]
    Symbol(String),

    #[error("symbol is not elliptic: min ratio {ratio:e} at node {node:?}")]
    NotElliptic { ratio: f64, node: Vec<usize> },

    #[error("factor vanishes at node {node:?}")]
    ZeroFactor { node: Vec<usize> },

    #[error("invalid factorization: {0}")]
    Factorization(String),

    #[error("index decomposition fails in component {component}: {reason}")]
    Index { component: usize, reason: String },

    #[error("N = {n:?} is nonzero; use general_solve")]
    RequiresGeneralSolution { n: Vec<u32> },

    #[error("invalid layer data: {0}")]
    Layer(String),

    #[error("field disagrees with the cone data at node {node:?}")]
    Disagreement { node: Vec<usize> },

    #[error("field container: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
