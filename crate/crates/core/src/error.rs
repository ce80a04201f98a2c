use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square or has ragged rows")]
    Shape,

    #[error("not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is not 1 (got {0})")]
    BadTrace(f64),

    #[error("effect eigenvalues leave [0, 1] (range {0:e}..{1:e})")]
    EffectOutOfRange(f64, f64),

    #[error("POVM elements do not sum to identity (deviation {0:e})")]
    NotComplete(f64),

    #[error("channel is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("trace has imaginary part {0:e}")]
    ImaginaryProbability(f64),

    #[error("Bloch vector norm {0} exceeds 1")]
    OutsideBlochBall(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("too many outcomes for permutation search: {0} (max 8)")]
    TooManyOutcomes(usize),

    #[error("invalid ontological model: {0}")]
    InvalidModel(String),

    #[error("invalid constraint system: {0}")]
    InvalidSystem(String),

    #[error("enumeration bound exceeded: {0}")]
    EnumerationBound(String),

    #[error("premise `{name}` failed (deviation {deviation:e})")]
    PremiseFailed { name: String, deviation: f64 },

    #[error("no contradiction available: {0}")]
    NoContradiction(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
