use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |A - A^†| = {deviation:.3e} exceeds bound {bound:.3e}")]
    NotHermitian { deviation: f64, bound: f64 },

    #[error(
        "not positive semidefinite: minimum eigenvalue {min_eigenvalue:.3e} is below {bound:.3e}"
    )]
    NotPositive { min_eigenvalue: f64, bound: f64 },

    #[error("trace is {trace:.12} (expected 1 within {tolerance:.1e})")]
    TraceNotOne { trace: f64, tolerance: f64 },

    #[error("block index ({i}, {j}) out of range for {m} blocks per side")]
    IndexOutOfRange { i: usize, j: usize, m: usize },

    #[error("vector {index} has norm {norm:.12} (expected 1 within {tolerance:.1e})")]
    NotNormalized {
        index: usize,
        norm: f64,
        tolerance: f64,
    },

    #[error("weight {index} is {weight:.3e}; ensemble weights must exceed {min:.1e}")]
    NonPositiveWeight { index: usize, weight: f64, min: f64 },

    #[error("ensemble weights sum to {sum:.12}, more than 1")]
    WeightSumTooLarge { sum: f64 },

    #[error("matrix is not unitary: max |U U^† - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("projective point has all coordinates zero")]
    ZeroPoint,

    #[error("rank bound k = {k} out of range (0 ≤ k ≤ {max})")]
    KOutOfRange { k: usize, max: usize },

    #[error("{count} minors requested, cap is {cap}")]
    CombinatorialBlowup { count: u128, cap: u128 },

    #[error("polynomial has degree zero")]
    DegreeZero,

    #[error("ensemble does not realize the state: max entry deviation {deviation:.3e}")]
    EnsembleMismatch { deviation: f64 },

    #[error("state is not pure: rank {rank}")]
    NotPure { rank: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
