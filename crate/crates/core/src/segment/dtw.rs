//! Dynamic time warping with unit steps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pointwise cost between aligned samples.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointCost {
    #[default]
    Absolute,
    Squared,
}

impl PointCost {
    #[inline]
    pub fn eval<F: Scalar>(self, a: F, b: F) -> F {
        let d = a - b;
        match self {
            PointCost::Absolute => d.abs(),
            PointCost::Squared => d * d,
        }
    }
}

/// DTW distance with absolute-difference cost.
pub fn dtw<F: Scalar>(a: &[F], b: &[F]) -> Result<F> {
    dtw_with(a, b, PointCost::Absolute)
}

/// DTW distance: minimum over monotone alignment paths using steps
/// (i-1, j), (i, j-1), (i-1, j-1) of the summed pointwise cost.
pub fn dtw_with<F: Scalar>(a: &[F], b: &[F], cost: PointCost) -> Result<F> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Size { min: 1, got: 0 });
    }
    let mut rows = PrefixDtw::new(b, cost);
    let mut last = F::zero();
    for &v in a {
        last = rows.push(v);
    }
    Ok(last)
}

/// Row-at-a-time DTW against a fixed reference.
///
/// After pushing `r` samples, [`PrefixDtw::push`] returns exactly
/// `dtw(pushed[..r], reference)`: the cells are the same cells the full
/// computation evaluates, in the same order.
#[derive(Debug, Clone)]
pub struct PrefixDtw<'a, F> {
    reference: &'a [F],
    cost: PointCost,
    row: Vec<F>,
    started: bool,
}

impl<'a, F: Scalar> PrefixDtw<'a, F> {
    pub fn new(reference: &'a [F], cost: PointCost) -> Self {
        Self {
            reference,
            cost,
            row: vec![F::zero(); reference.len()],
            started: false,
        }
    }

    pub fn reset(&mut self) {
        self.started = false;
    }

    /// Append one sample of the query; returns the DTW of the query so far.
    #[inline]
    pub fn push(&mut self, v: F) -> F {
        let reference = self.reference;
        let row = &mut self.row;
        match self.cost {
            PointCost::Absolute => push_row(row, reference, v, !self.started, |a, b| (a - b).abs()),
            PointCost::Squared => push_row(row, reference, v, !self.started, |a, b| (a - b) * (a - b)),
        }
        self.started = true;
        row[reference.len() - 1]
    }
}

#[inline(always)]
fn lesser<F: PartialOrd>(a: F, b: F) -> F {
    if b < a {
        b
    } else {
        a
    }
}

#[inline(always)]
fn push_row<F: Scalar>(row: &mut [F], reference: &[F], v: F, first: bool, cost: impl Fn(F, F) -> F) {
    if first {
        let mut acc = cost(v, reference[0]);
        row[0] = acc;
        for (cell, &r) in row[1..].iter_mut().zip(&reference[1..]) {
            acc = acc + cost(v, r);
            *cell = acc;
        }
    } else {
        let mut diag = row[0];
        let mut left = row[0] + cost(v, reference[0]);
        row[0] = left;
        for (cell, &r) in row[1..].iter_mut().zip(&reference[1..]) {
            let up = *cell;
            left = cost(v, r) + lesser(lesser(up, left), diag);
            *cell = left;
            diag = up;
        }
    }
}

/// Number of queries advanced together by [`LanedPrefixDtw`].
pub const LANES: usize = 8;

/// [`PrefixDtw`] over `LANES` independent queries at once.
///
/// Each lane performs exactly the scalar recurrence; interleaving only
/// gives the CPU independent dependency chains to overlap.
#[derive(Debug, Clone)]
pub struct LanedPrefixDtw<'a, F> {
    reference: &'a [F],
    cost: PointCost,
    rows: Vec<[F; LANES]>,
    started: bool,
}

impl<'a, F: Scalar> LanedPrefixDtw<'a, F> {
    pub fn new(reference: &'a [F], cost: PointCost) -> Self {
        Self {
            reference,
            cost,
            rows: vec![[F::zero(); LANES]; reference.len()],
            started: false,
        }
    }

    pub fn reset(&mut self) {
        self.started = false;
    }

    /// Append one sample per lane; returns each lane's DTW so far.
    #[inline]
    pub fn push(&mut self, v: [F; LANES]) -> [F; LANES] {
        let first = !self.started;
        self.started = true;
        match self.cost {
            PointCost::Absolute => push_laned(&mut self.rows, self.reference, v, first, |a, b| (a - b).abs()),
            PointCost::Squared => push_laned(&mut self.rows, self.reference, v, first, |a, b| (a - b) * (a - b)),
        }
        self.rows[self.reference.len() - 1]
    }
}

#[inline(always)]
fn push_laned<F: Scalar>(
    rows: &mut [[F; LANES]],
    reference: &[F],
    v: [F; LANES],
    first: bool,
    cost: impl Fn(F, F) -> F,
) {
    if first {
        let mut acc = [F::zero(); LANES];
        for (j, (cell, &r)) in rows.iter_mut().zip(reference).enumerate() {
            for k in 0..LANES {
                acc[k] = if j == 0 { cost(v[k], r) } else { acc[k] + cost(v[k], r) };
            }
            *cell = acc;
        }
    } else {
        let mut diag = rows[0];
        let mut left = [F::zero(); LANES];
        for k in 0..LANES {
            left[k] = rows[0][k] + cost(v[k], reference[0]);
        }
        rows[0] = left;
        for (cell, &r) in rows[1..].iter_mut().zip(&reference[1..]) {
            let up = *cell;
            for k in 0..LANES {
                left[k] = cost(v[k], r) + lesser(lesser(up[k], left[k]), diag[k]);
            }
            *cell = left;
            diag = up;
        }
    }
}

#[cfg(test)]
pub(crate) mod oracle {
    /// Minimum over every monotone alignment path, by explicit recursion
    /// over path prefixes. Exponential; only for tiny inputs.
    pub fn brute_force_dtw(a: &[f64], b: &[f64]) -> f64 {
        fn walk(a: &[f64], b: &[f64], i: usize, j: usize, acc: f64, best: &mut f64) {
            let acc = acc + (a[i] - b[j]).abs();
            if i == a.len() - 1 && j == b.len() - 1 {
                if acc < *best {
                    *best = acc;
                }
                return;
            }
            if i + 1 < a.len() {
                walk(a, b, i + 1, j, acc, best);
            }
            if j + 1 < b.len() {
                walk(a, b, i, j + 1, acc, best);
            }
            if i + 1 < a.len() && j + 1 < b.len() {
                walk(a, b, i + 1, j + 1, acc, best);
            }
        }
        let mut best = f64::INFINITY;
        walk(a, b, 0, 0, 0.0, &mut best);
        best
    }
}

#[cfg(test)]
mod tests {
    use super::oracle::brute_force_dtw;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let a = [0.5, 1.5, -2.0, 3.0];
        assert_eq!(dtw(&a, &a).unwrap(), 0.0);
        assert_eq!(dtw(&[0.0], &[5.0]).unwrap(), 5.0);
        assert_eq!(brute_force_dtw(&[1.0, 2.0, 3.0], &[1.0, 3.0]), 1.0);
        assert_eq!(dtw(&[1.0, 2.0, 3.0], &[1.0, 3.0]).unwrap(), 1.0);
        assert!(matches!(dtw::<f64>(&[], &[1.0]), Err(Error::Size { .. })));
    }

    #[test]
    fn squared_cost() {
        assert_eq!(dtw_with(&[0.0], &[3.0], PointCost::Squared).unwrap(), 9.0);
        assert_eq!(dtw_with(&[1.0, 2.0, 3.0], &[1.0, 3.0], PointCost::Squared).unwrap(), 1.0);
    }

    #[test]
    fn repetition_is_free() {
        assert_eq!(dtw(&[1.0, 1.0, 2.0, 3.0, 3.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert!(dtw(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() > 0.0);
    }

    #[test]
    fn prefix_matches_full() {
        let reference = [0.1f64, 0.9, 0.4, 0.3];
        let query = [0.0f64, 1.0, 0.5, 0.2, 0.3, 0.8];
        let mut p = PrefixDtw::new(&reference, PointCost::Absolute);
        for r in 1..=query.len() {
            let inc = p.push(query[r - 1]);
            assert_eq!(inc.to_bits(), dtw(&query[..r], &reference).unwrap().to_bits());
        }
        p.reset();
        assert_eq!(p.push(0.1), dtw(&[0.1], &reference).unwrap());
    }

    #[test]
    fn laned_matches_scalar_bitwise() {
        let reference: Vec<f64> = (0..9).map(|k| ((k * 7) % 5) as f64 * 0.37).collect();
        let queries: Vec<Vec<f64>> = (0..LANES)
            .map(|l| (0..12).map(|k| (((k + 3 * l) * 11) % 7) as f64 * 0.29 - 0.4).collect())
            .collect();
        for cost in [PointCost::Absolute, PointCost::Squared] {
            let mut laned = LanedPrefixDtw::new(&reference, cost);
            for r in 0..12 {
                let v: [f64; LANES] = std::array::from_fn(|l| queries[l][r]);
                let out = laned.push(v);
                for l in 0..LANES {
                    let full = dtw_with(&queries[l][..=r], &reference, cost).unwrap();
                    assert_eq!(out[l].to_bits(), full.to_bits());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            a in prop::collection::vec(-5.0f64..5.0, 1..=6),
            b in prop::collection::vec(-5.0f64..5.0, 1..=6),
        ) {
            let fast = dtw(&a, &b).unwrap();
            prop_assert_eq!(fast, brute_force_dtw(&a, &b));
            prop_assert_eq!(fast.to_bits(), dtw(&b, &a).unwrap().to_bits());
            prop_assert!(fast >= 0.0);
        }

        #[test]
        fn zero_iff_equal_up_to_repetition(
            base in prop::collection::vec(-3i32..3, 1..6),
            reps in prop::collection::vec(1usize..3, 6),
        ) {
            let a: Vec<f64> = base.iter().map(|&v| v as f64).collect();
            let stretched: Vec<f64> = a.iter().zip(&reps).flat_map(|(&v, &r)| std::iter::repeat_n(v, r)).collect();
            prop_assert_eq!(dtw(&a, &stretched).unwrap(), 0.0);
        }
    }
}
