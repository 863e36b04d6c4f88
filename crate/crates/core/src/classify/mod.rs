//! Segment features, cubic-kernel one-vs-one SVM and k-segment voting.

mod features;
mod kernel;
mod ovo;
mod smo;
mod vote;

pub use features::{extract_features, quantile, FeatureVector, FEATURE_DIM, FEATURE_NAMES};
pub use kernel::{cubic_kernel, gram_matrix};
pub use ovo::{
    train, LabeledDataset, OvoSvmModel, PairModel, Prediction, Standardizer, MODEL_SCHEMA_VERSION,
};
pub use smo::{kkt_violation, solve, SmoParams, SmoSolution};
pub use vote::{vote, vote_correct_prob, vote_window, vote_with_rng, VoteConfig};
