use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate impedance pair: Z_a + Z_c is zero")]
    DegenerateImpedance,

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid scene: {0}")]
    Scene(String),

    #[error("invalid filter spec: {0}")]
    FilterSpec(String),

    #[error("degenerate range: sequence is constant (max == min)")]
    DegenerateRange,

    #[error("sequence too short: need at least {min} samples, got {got}")]
    Size { min: usize, got: usize },

    #[error("invalid segmenter config: {0}")]
    Config(String),

    #[error(
        "no feasible segmentation: {len} samples cannot be partitioned into segments \
         with lengths in [{min_len}, {max_len}]"
    )]
    Infeasible {
        len: usize,
        min_len: usize,
        max_len: usize,
    },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("training failed: {0}")]
    Training(String),

    #[error("invalid data: {0}")]
    Data(String),

    #[error("class {label:?} has {count} samples, fewer than the {folds} folds requested")]
    Stratification {
        label: String,
        count: usize,
        folds: usize,
    },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
