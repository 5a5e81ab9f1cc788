use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31]")]
    NotPrime(u64),
    #[error("nilpotency index must be at least 1")]
    InvalidNilpotency,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map is not injective: {0}")]
    NotMono(String),
    #[error("map is not surjective: {0}")]
    NotEpi(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("map is not R-linear: {0}")]
    NotLinear(String),
    #[error("module is not injective (Jordan type {0:?})")]
    NotInjectiveModule(Vec<usize>),
    #[error("no extension along the mono exists: {0}")]
    NoExtension(String),
    #[error("invalid complex at degree {degree}: {reason}")]
    InvalidComplex { degree: i64, reason: String },
    #[error("invalid chain map at degree {degree}: {reason}")]
    InvalidChainMap { degree: i64, reason: String },
    #[error("double complex at ({i}, {j}): {reason}")]
    InvalidDoubleComplex { i: i64, j: usize, reason: String },
    #[error("complex is not acyclic: H^{degree} has dimension {dim}")]
    NotAcyclic { degree: i64, dim: usize },
    #[error("tower does not stabilize at its last stage; enlarge the tower depth")]
    NonStabilizingTower,
    #[error("1 - shift is not surjective in degree {0}")]
    ShiftNotSurjective(i64),
    #[error("depth {depth} exceeds the validity window; rebuild with jmax >= {required_jmax}")]
    DepthExceedsWindow { depth: i64, required_jmax: usize },
}
