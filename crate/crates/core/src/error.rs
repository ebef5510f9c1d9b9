use thiserror::Error;

/// Errors produced by covariance construction, reconstruction and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("mode count must be at least {min}, got {got}")]
    InvalidModeCount { got: usize, min: usize },

    #[error("invalid matrix shape: expected {expected}, got {got}")]
    InvalidShape { expected: String, got: String },

    #[error("matrix is not symmetric (max asymmetry {asym:.3e} exceeds {tol:.3e})")]
    NotSymmetric { asym: f64, tol: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eig:.6e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("matrix is not symplectic (defect {defect:.3e} exceeds {tol:.3e})")]
    NotSymplectic { defect: f64, tol: f64 },

    #[error("matrix is not orthogonal-symplectic: {0}")]
    NotOrthoSymplectic(String),

    #[error("covariance matrix is unphysical (min symplectic eigenvalue {lambda_min:.6})")]
    NotPhysical { lambda_min: f64 },

    #[error("singular Cayley parametrization (condition number {cond:.3e})")]
    SingularParametrization { cond: f64 },

    #[error("decomposition failed: {0}")]
    DecompositionFailed(String),

    #[error("invalid adjacency matrix: {0}")]
    InvalidAdjacency(String),

    #[error("loss must lie in [0, 1), got {0}")]
    InvalidLoss(f64),

    #[error("squeezing level must be non-negative decibels, got {0}")]
    InvalidSqueezing(f64),

    #[error("mode index {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },

    #[error("incomplete measurement plan; missing pairs {missing:?}")]
    IncompletePlan { missing: Vec<(usize, usize)> },

    #[error("scheme mismatch: expected {expected}, got {got}")]
    SchemeMismatch { expected: String, got: String },

    #[error("unknown scheme tag {got:?}; valid tags are \"single\" and \"joint\"")]
    UnknownScheme { got: String },

    #[error("setting {index} has no outcomes")]
    EmptySetting { index: usize },

    #[error("repetition count must be at least 2, got {0}")]
    TooFewRepetitions(usize),

    #[error("dataset format error: {0}")]
    DatasetFormat(String),

    #[error("invalid bipartition: {0}")]
    InvalidPartition(String),

    #[error("optimization failed: {0}")]
    OptimizationFailure(String),

    #[error("likelihood evaluation failed: {0}")]
    LikelihoodFailure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
