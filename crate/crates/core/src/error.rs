use thiserror::Error;

use crate::fock::Sector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("sector mismatch: expected {expected}, found {found}")]
    SectorMismatch { expected: Sector, found: Sector },
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("boson index {index} out of range 1..={rank}")]
    BosonOutOfRange { index: usize, rank: usize },
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("isotropic top entry: (λ_top, λ_top) = 0, so the top Whittaker eigenvalue vanishes")]
    IsotropicTop,
    #[error("top entry of the Whittaker type is zero")]
    ZeroTop,
    #[error("2ζ_top = {0} has no square root in Q(i); supply an exact sphere point or use numeric mode")]
    NoExactSquareRoot(String),
    #[error("sphere point does not satisfy Σ z_j² = 1")]
    NotOnSphere,
    #[error("highest-weight λ: every positive-index entry vanishes")]
    HighestWeight,
    #[error("constant input: nothing to reduce")]
    ConstantInput,
    #[error("zero vector has no reduction certificate")]
    ZeroInput,
    #[error("no quadratic element reduces the input (this indicates a bug)")]
    ReductionStuck,
    #[error("invalid annihilation bound m = {m}: h_{i}({k}) does not kill the vector")]
    InvalidBound { m: i64, i: usize, k: i64 },
    #[error("{0}")]
    Precondition(String),
}

impl Error {
    /// Process exit status: 1 for malformed input, 2 for violated mathematical preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Schema(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::SectorMismatch { .. }
            | Error::RankMismatch { .. }
            | Error::BosonOutOfRange { .. }
            | Error::DimensionMismatch(_) => 1,
            Error::ReductionStuck => 3,
            _ => 2,
        }
    }
}
