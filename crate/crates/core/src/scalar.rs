//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point scalar the pipeline is generic over.
///
/// Implemented for `f32` and `f64`. The simulator, DSP chain, segmenter and
/// classifier are all written against this trait; the crate root exposes
/// `f64` aliases for the common case.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Conversion from a count or index.
    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sum of a slice in left-to-right order.
pub(crate) fn sum<F: Scalar>(xs: &[F]) -> F {
    xs.iter().fold(F::zero(), |acc, &x| acc + x)
}

pub(crate) fn mean<F: Scalar>(xs: &[F]) -> F {
    sum(xs) / F::from_usize_lossy(xs.len())
}

pub(crate) fn min_max<F: Scalar>(xs: &[F]) -> (F, F) {
    xs.iter()
        .fold((F::infinity(), F::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x)))
}
