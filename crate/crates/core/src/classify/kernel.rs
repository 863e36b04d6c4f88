use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Cubic polynomial kernel `(1 + u·v)³`.
pub fn cubic_kernel<F: Scalar>(u: &[F], v: &[F]) -> Result<F> {
    if u.len() != v.len() {
        return Err(Error::Shape {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(cubic_unchecked(u, v))
}

#[inline]
pub(crate) fn cubic_unchecked<F: Scalar>(u: &[F], v: &[F]) -> F {
    let dot = u.iter().zip(v).fold(F::zero(), |acc, (&a, &b)| acc + a * b);
    let s = F::one() + dot;
    s * s * s
}

/// Gram matrix of the cubic kernel, row-major.
pub fn gram_matrix<F: Scalar>(points: &[Vec<F>]) -> Vec<Vec<F>> {
    points
        .iter()
        .map(|p| points.iter().map(|q| cubic_unchecked(p, q)).collect())
        .collect()
}
