//! Globally optimal length-constrained partition against a fixed template.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dtw::{dtw_with, LanedPrefixDtw, PointCost, LANES};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Contiguous partition of a sequence into half-open segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segmentation<F> {
    /// `0 = b_0 < b_1 < ... < b_k = |x|`; segment `j` is `[b_j, b_{j+1})`.
    pub boundaries: Vec<usize>,
    /// Sum of per-segment DTW distances to the template it was fitted against.
    pub total_cost: F,
}

impl<F: Scalar> Segmentation<F> {
    /// Build from boundaries, checking they cover `[0, len)` with increasing cuts.
    pub fn from_boundaries(boundaries: Vec<usize>, len: usize, total_cost: F) -> Result<Self> {
        if boundaries.first() != Some(&0) || boundaries.last() != Some(&len) {
            return Err(Error::Data(format!("boundaries must start at 0 and end at {len}")));
        }
        if boundaries.len() < 2 || boundaries.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Data("boundaries must be strictly increasing".into()));
        }
        Ok(Self { boundaries, total_cost })
    }

    pub fn count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn ranges(&self) -> impl Iterator<Item = std::ops::Range<usize>> + '_ {
        self.boundaries.windows(2).map(|w| w[0]..w[1])
    }

    pub fn lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.boundaries.windows(2).map(|w| w[1] - w[0])
    }

    /// Segment slices of `x`.
    pub fn segments<'x>(&'x self, x: &'x [F]) -> impl Iterator<Item = &'x [F]> + 'x {
        self.ranges().map(move |r| &x[r])
    }
}

/// Admissible segment lengths in samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LengthWindow {
    pub min_len: usize,
    pub max_len: usize,
}

impl LengthWindow {
    pub fn contains(&self, len: usize) -> bool {
        (self.min_len..=self.max_len).contains(&len)
    }

    /// Whether some sum of admissible lengths equals `n`.
    pub fn feasible(&self, n: usize) -> bool {
        // k segments cover [k·min, k·max]
        if n == 0 {
            return false;
        }
        let k_lo = n.div_ceil(self.max_len);
        let k_hi = n / self.min_len;
        k_lo <= k_hi
    }
}

/// `Dist(S, ξ)`: sum of per-segment DTW distances, in segment order.
pub fn dist_to_template<F: Scalar>(x: &[F], seg: &Segmentation<F>, template: &[F], cost: PointCost) -> Result<F> {
    if seg.boundaries.last() != Some(&x.len()) {
        return Err(Error::Data("segmentation does not cover the sequence".into()));
    }
    seg.segments(x)
        .try_fold(F::zero(), |acc, s| Ok(acc + dtw_with(s, template, cost)?))
}

/// Optimal segmentation of `x` against `template` with segment lengths in `window`.
///
/// `D[l] = min_τ D[τ] + dtw(x[τ..l], ξ)` over admissible `l - τ`. For each
/// start `τ` a single row-streaming DTW pass yields the cost of every
/// admissible segment beginning there, bit-identical to evaluating each
/// separately. Ties keep the earliest start. Starts are scored in parallel
/// batches; relaxation is sequential, so results do not depend on scheduling.
pub fn optimal_partition<F: Scalar>(
    x: &[F],
    template: &[F],
    window: LengthWindow,
    cost: PointCost,
) -> Result<Segmentation<F>> {
    let n = x.len();
    if template.is_empty() {
        return Err(Error::Size { min: 1, got: 0 });
    }
    if window.min_len == 0 || window.min_len > window.max_len {
        return Err(Error::Config(format!(
            "invalid length window [{}, {}]",
            window.min_len, window.max_len
        )));
    }
    if !window.feasible(n) {
        return Err(Error::Infeasible {
            len: n,
            min_len: window.min_len,
            max_len: window.max_len,
        });
    }

    // starts reachable by some feasible prefix
    let starts: Vec<usize> = (0..=n - window.min_len)
        .filter(|&t| t == 0 || window.feasible(t))
        .collect();

    let costs = segment_costs(x, template, &starts, window, cost);

    let mut best = vec![F::infinity(); n + 1];
    let mut back = vec![usize::MAX; n + 1];
    best[0] = F::zero();
    for (&t, seg_costs) in starts.iter().zip(&costs) {
        if !best[t].is_finite() {
            continue;
        }
        for (k, &c) in seg_costs.iter().enumerate() {
            let l = t + window.min_len + k;
            let cand = best[t] + c;
            if cand < best[l] {
                best[l] = cand;
                back[l] = t;
            }
        }
    }
    if back[n] == usize::MAX {
        return Err(Error::Infeasible {
            len: n,
            min_len: window.min_len,
            max_len: window.max_len,
        });
    }
    let mut boundaries = vec![n];
    let mut l = n;
    while l > 0 {
        l = back[l];
        boundaries.push(l);
    }
    boundaries.reverse();
    Ok(Segmentation {
        boundaries,
        total_cost: best[n],
    })
}

/// DTW cost of `x[t..t+len]` against `template` for every start `t` and
/// admissible `len`, indexed `[start][len - min_len]`.
fn segment_costs<F: Scalar>(
    x: &[F],
    template: &[F],
    starts: &[usize],
    window: LengthWindow,
    cost: PointCost,
) -> Vec<Vec<F>> {
    let n = x.len();
    let batches: Vec<Vec<Vec<F>>> = starts
        .par_chunks(LANES)
        .map_init(
            || LanedPrefixDtw::new(template, cost),
            |rows, chunk| {
                rows.reset();
                let ends: Vec<usize> = chunk.iter().map(|&t| (t + window.max_len).min(n)).collect();
                let depth = chunk.iter().zip(&ends).map(|(t, e)| e - t).max().unwrap_or(0);
                let mut out: Vec<Vec<F>> = chunk
                    .iter()
                    .map(|_| Vec::with_capacity(window.max_len - window.min_len + 1))
                    .collect();
                for r in 0..depth {
                    // lanes past their end (or unused) replay their last sample; outputs discarded
                    let v: [F; LANES] = std::array::from_fn(|k| match chunk.get(k) {
                        Some(&t) => x[(t + r).min(ends[k] - 1)],
                        None => F::zero(),
                    });
                    let c = rows.push(v);
                    if r + 1 >= window.min_len {
                        for (k, &t) in chunk.iter().enumerate() {
                            if t + r < ends[k] {
                                out[k].push(c[k]);
                            }
                        }
                    }
                }
                out
            },
        )
        .collect();
    batches.into_iter().flatten().collect()
}
