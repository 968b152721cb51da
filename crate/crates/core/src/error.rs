use thiserror::Error;

pub type Result<T, E = WalkError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("order amplitudes are not normalized (norm² = {0})")]
    Normalization(f64),

    #[error("expected {expected} order amplitudes, got {actual}")]
    OrderDimension { expected: usize, actual: usize },

    #[error("invalid lattice [{min}, {max}]")]
    InvalidLattice { min: i64, max: i64 },

    #[error("amplitude would reach the lattice boundary at site {site}")]
    Sizing { site: i64 },

    #[error("window [{min}, {max}] does not cover the state's support")]
    Window { min: i64, max: i64 },

    #[error("walker density requires a single chirality slice")]
    MixedChirality,

    #[error("angle {name} is not finite ({value})")]
    NonFiniteAngle { name: &'static str, value: f64 },

    #[error("process {0}: empty")]
    EmptyProcess(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("switch needs {expected} order levels, state has {actual}")]
    SwitchDimension { expected: usize, actual: usize },

    #[error("cannot normalize a zero-weight branch")]
    ZeroBranch,

    #[error("negative probability {value} at site {site}")]
    NegativeProbability { site: i64, value: f64 },

    #[error("process spec: {path}: {message}")]
    Config { path: String, message: String },

    #[error("expansion of {steps} steps exceeds the limit of {limit}")]
    ExpansionBlowup { steps: usize, limit: usize },

    #[error("unsupported parameter: {0}")]
    Unsupported(String),
}
