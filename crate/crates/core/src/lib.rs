//! Motion sensing over backscattered wireless envelopes.
//!
//! * [`sim`] synthesizes labelled I/Q traces from a tag link budget and
//!   periodically moving point scatterers.
//! * [`dsp`] turns I/Q into a smoothed envelope and provides normalization
//!   and spline warping.
//! * [`segment`] counts repetitions without a motion template by jointly
//!   fitting a segmentation and a template under DTW.
//! * [`classify`] extracts ten shape statistics per segment and classifies
//!   them with a one-vs-one cubic-kernel SVM and k-segment voting.
//! * [`eval`] runs stratified k-fold evaluation.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

// `!(x > 0)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod dsp;
pub mod error;
pub mod eval;
pub mod io;
pub mod scalar;
pub mod seed;
pub mod segment;
pub mod sim;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type LinkBudget = sim::LinkBudget<f64>;
pub type CarrierConfig = sim::CarrierConfig<f64>;
pub type Scatterer = sim::Scatterer<f64>;
pub type Scene = sim::Scene<f64>;
pub type IqTrace = sim::IqTrace<f64>;
pub type Envelope = dsp::Envelope<f64>;
pub type FilterSpec = dsp::FilterSpec<f64>;
pub type SegmenterConfig = segment::SegmenterConfig<f64>;
pub type Segmentation = segment::Segmentation<f64>;
pub type SegmentationResult = segment::SegmentationResult<f64>;
pub type FeatureVector = classify::FeatureVector<f64>;
pub type LabeledDataset = classify::LabeledDataset<f64>;
pub type OvoSvmModel = classify::OvoSvmModel<f64>;
pub type EvalReport = eval::EvalReport<f64>;
