use thiserror::Error;

/// Errors produced by the precoding, training, and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("symbol vector has zero norm")]
    ZeroSymbolVector,

    #[error("degenerate precoding output: |s^H H x| = {magnitude:.3e}")]
    DegeneratePrecoding { magnitude: f64 },

    #[error("channel matrix is rank deficient (pivot {pivot:.3e} at row {row})")]
    RankDeficient { row: usize, pivot: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dataset format: {0}")]
    DatasetFormat(String),

    #[error("training failed at epoch {epoch}: {reason}")]
    TrainingFailed { epoch: usize, reason: String },

    #[error("evaluation failed on sample {sample}: {source}")]
    SampleFailed {
        sample: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("evaluation seed {0} must differ from the training seed")]
    SeedCollision(u64),

    #[error("no schedule provided for t_max = {0}")]
    MissingSchedule(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
