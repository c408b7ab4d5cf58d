use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vector is not in the dual cone (violation {violation:.3e})")]
    NotInDualCone { violation: f64 },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("beta = {0} outside the representable range [-700, 700]")]
    BetaOutOfRange(f64),

    #[error("face {face} does not match exposing vector {z}")]
    FaceMismatch { face: String, z: String },

    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("alternating projections diverged: last change {change:.3e} after {iterations} iterations")]
    Divergence { iterations: usize, change: f64 },

    #[error("certificate search inconclusive after {evaluations} evaluations")]
    Inconclusive { evaluations: usize },

    #[error("no admissible samples: {0}")]
    EmptySample(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unsupported composite regime: {0}")]
    UnsupportedRegime(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::Divergence { .. } | Error::Inconclusive { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
