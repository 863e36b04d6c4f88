//! I/Q to envelope conversion and shared signal primitives.

mod envelope;
mod filter;
mod normalize;
mod spline;

pub use envelope::{energy, Envelope, Provenance};
pub use filter::{lowpass, response_magnitude, FilterSpec};
pub use normalize::normalize;
pub use spline::{warp_spline, NaturalSpline};
