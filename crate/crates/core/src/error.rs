use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {max_dev:.3e})")]
    NonHermitian { max_dev: f64 },
    #[error("matrix is not a density matrix: {0}")]
    NotAState(String),
    #[error("matrix is not a projector: {0}")]
    NotAProjector(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigenvalue {0} lies outside the domain of the function")]
    Domain(f64),
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("point lies outside the convex support (separation gap {gap:.3e})")]
    NotInConvexSupport { gap: f64 },
    #[error("point is on the relative boundary of the convex support (|lambda| = {norm:.3e})")]
    BoundaryDetected { norm: f64 },
    #[error("operation requires r = 2 observables, got {0}")]
    UnsupportedRank(usize),
    #[error("locality {k} is invalid for a system of {n} units")]
    InvalidK { k: usize, n: usize },
    #[error("face search failed: {0}")]
    FaceSearchFailed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
