use crate::error::{Error, Result};
use crate::scalar::{min_max, Scalar};

/// Min-max normalization onto `[0, 1]`.
pub fn normalize<F: Scalar>(x: &[F]) -> Result<Vec<F>> {
    if x.len() < 2 {
        return Err(Error::Size { min: 2, got: x.len() });
    }
    let (lo, hi) = min_max(x);
    let range = hi - lo;
    if !(range > F::zero()) || !range.is_finite() {
        return Err(Error::DegenerateRange);
    }
    Ok(x.iter()
        .map(|&v| {
            if v == hi {
                F::one()
            } else {
                (v - lo) / range
            }
        })
        .collect())
}
