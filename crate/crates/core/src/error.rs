use thiserror::Error;

/// Errors raised by model construction, cycle generation and the force method.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("disconnected structure: node {node} is not reachable from the ground")]
    DisconnectedStructure { node: u32 },

    #[error("multigraph input: {0}")]
    Multigraph(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty graph")]
    EmptyGraph,

    #[error("not enough independent cycles: found {found}, need {needed}")]
    InsufficientCycles { found: usize, needed: usize },

    #[error("numerical force method unsupported for 3D models")]
    Unsupported3d,

    #[error("rank-deficient statical basis")]
    RankDeficient,

    #[error("load applied to ground node {0}")]
    LoadOnGround(u32),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not symmetric (max skew {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("zero row {0} in matrix")]
    ZeroRow(usize),

    #[error("chopped pivot breakdown at step {0}")]
    ChoppedPivotBreakdown(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("usage error: {0}")]
    Usage(String),
}

impl Error {
    /// Short machine-readable tag used by the CLI and the C interface.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModel(_) => "invalid_model",
            Error::DisconnectedStructure { .. } => "disconnected_structure",
            Error::Multigraph(_) => "multigraph",
            Error::Domain(_) => "domain",
            Error::EmptyGraph => "empty_graph",
            Error::InsufficientCycles { .. } => "insufficient_cycles",
            Error::Unsupported3d => "unsupported_3d",
            Error::RankDeficient => "rank_deficient",
            Error::LoadOnGround(_) => "load_on_ground",
            Error::Dimension(_) => "dimension",
            Error::NotSymmetric(_) => "not_symmetric",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::ZeroRow(_) => "zero_row",
            Error::ChoppedPivotBreakdown(_) => "chopped_pivot_breakdown",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Usage(_) => "usage",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
