use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variant names mirror the error codes reported by the command-line tool
/// (see [`ConeError::code`]).
#[derive(Debug, Error)]
pub enum ConeError {
    #[error("matrix is not Hermitian (relative deviation {deviation:.3e} exceeds {tolerance:.1e})")]
    NonHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dimension {requested} exceeds the configured cap {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("map is not completely positive (Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCp { min_eigenvalue: f64 },

    #[error("input operator is not positive semidefinite (eigenvalue {min_eigenvalue:.3e})")]
    NotPsdInput { min_eigenvalue: f64 },

    #[error("wrong dimension: {0}")]
    WrongDimension(String),

    #[error("operator rank {rank} exceeds seed rank {k}")]
    RankTooHigh { rank: usize, k: usize },

    #[error("seed operator is ill-conditioned (sigma_k / sigma_1 = {ratio:.3e})")]
    IllConditioned { ratio: f64 },

    #[error("map violates the symmetry precondition Phi = Phi^dagger = t Phi t (deviation {deviation:.3e})")]
    SymmetryViolation { deviation: f64 },

    #[error("map is certified not positive (product-vector value {value:.3e})")]
    NotPositive { value: f64 },

    #[error("rank decision is ambiguous: a singular value ratio {ratio:.3e} sits within a decade of the threshold; candidates {candidates:?}")]
    AmbiguousRank { ratio: f64, candidates: Vec<String> },

    #[error("certificate does not reproduce its target (relative error {error:.3e})")]
    CertificateMismatch { error: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl ConeError {
    /// Stable upper-case code used in reports.
    pub fn code(&self) -> &'static str {
        match self {
            ConeError::NonHermitian { .. } => "NON_HERMITIAN",
            ConeError::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            ConeError::DimensionCap { .. } => "DIMENSION_CAP",
            ConeError::NotCp { .. } => "NOT_CP",
            ConeError::NotPsdInput { .. } => "NOT_PSD_INPUT",
            ConeError::WrongDimension(_) => "WRONG_DIMENSION",
            ConeError::RankTooHigh { .. } => "RANK_TOO_HIGH",
            ConeError::IllConditioned { .. } => "ILL_CONDITIONED",
            ConeError::SymmetryViolation { .. } => "SYMMETRY_VIOLATION",
            ConeError::NotPositive { .. } => "NOT_POSITIVE",
            ConeError::AmbiguousRank { .. } => "AMBIGUOUS_RANK",
            ConeError::CertificateMismatch { .. } => "CERTIFICATE_MISMATCH",
            ConeError::InvalidInput(_) => "INVALID_INPUT",
            ConeError::Json(_) => "BAD_JSON",
            ConeError::Io(_) => "IO",
        }
    }
}

pub type Result<T> = std::result::Result<T, ConeError>;
