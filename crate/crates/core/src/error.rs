use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis of size {size} exceeds the resource cap {cap}")]
    ResourceCap { size: u128, cap: usize },

    #[error("vectors or operators live on different Fock bases ({left} vs {right})")]
    BasisMismatch { left: String, right: String },

    #[error("symmetric tensor of degree {degree} exceeds the cap {cap}")]
    DegreeOverflow { degree: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("generator index {index} out of range for {count} generators")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("truncation budget exceeded: degree cap {cap} but {required} is required")]
    TruncationBudget { cap: usize, required: usize },

    #[error("numerical routine failed to converge: {0}")]
    Convergence(String),

    #[error("empty spectral cut: threshold {lambda} is above the spectral radius {radius}")]
    EmptySpectralCut { lambda: f64, radius: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
