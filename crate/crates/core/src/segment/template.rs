use super::partition::Segmentation;
use crate::dsp::warp_spline;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Length-weighted mean of the segments warped to `m` samples:
/// `ξ = (1/|x|) Σ |s_j| ω(s_j, m)`.
pub fn update_template<F: Scalar>(x: &[F], seg: &Segmentation<F>, m: usize) -> Result<Vec<F>> {
    if m < 2 {
        return Err(Error::Size { min: 2, got: m });
    }
    if seg.boundaries.last() != Some(&x.len()) {
        return Err(Error::Data("segmentation does not cover the sequence".into()));
    }
    let total = F::from_usize_lossy(x.len());
    let mut acc = vec![F::zero(); m];
    for s in seg.segments(x) {
        let warped = warp_spline(s, m)?;
        let w = F::from_usize_lossy(s.len());
        for (a, v) in acc.iter_mut().zip(warped) {
            *a = *a + w * v;
        }
    }
    Ok(acc.into_iter().map(|v| v / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seg(b: Vec<usize>) -> Segmentation<f64> {
        let n = *b.last().unwrap();
        Segmentation::from_boundaries(b, n, 0.0).unwrap()
    }

    #[test]
    fn identical_segments_reproduce_themselves() {
        let s = [0.0, 1.0, 4.0, 2.0];
        let x: Vec<f64> = s.iter().cycle().take(12).copied().collect();
        let t = update_template(&x, &seg(vec![0, 4, 8, 12]), 4).unwrap();
        for (a, b) in t.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_length_segments_average() {
        let x = [0.0, 2.0, 4.0, 2.0, 4.0, 0.0];
        let t = update_template(&x, &seg(vec![0, 3, 6]), 3).unwrap();
        assert_eq!(t, vec![1.0, 3.0, 2.0]);
    }

    #[test]
    fn unequal_lengths_weighted_by_length() {
        let s1 = [0.0, 1.0, 0.5, 2.0];
        let s2 = [3.0, 2.0, 1.0, 0.0, -1.0, 0.0, 1.0, 2.0];
        let x: Vec<f64> = s1.iter().chain(&s2).copied().collect();
        let t = update_template(&x, &seg(vec![0, 4, 12]), 6).unwrap();
        let w1 = warp_spline(&s1, 6).unwrap();
        let w2 = warp_spline(&s2, 6).unwrap();
        for k in 0..6 {
            let oracle = (4.0 * w1[k] + 8.0 * w2[k]) / 12.0;
            assert!((t[k] - oracle).abs() < 1e-12);
        }
    }

    proptest! {
        // For equal-length segments the template is the least-squares centre:
        // perturbing it in any direction cannot reduce the squared error.
        #[test]
        fn least_squares_minimizer(
            x in prop::collection::vec(-5.0f64..5.0, 20),
            dir in prop::collection::vec(-1.0f64..1.0, 5),
            eps in 1e-3f64..0.5,
        ) {
            let s = seg(vec![0, 5, 10, 15, 20]);
            let t = update_template(&x, &s, 5).unwrap();
            let sse = |tpl: &[f64]| -> f64 {
                s.segments(&x).map(|sg| sg.iter().zip(tpl).map(|(a, b)| (a - b).powi(2)).sum::<f64>()).sum()
            };
            let moved: Vec<f64> = t.iter().zip(&dir).map(|(a, d)| a + eps * d).collect();
            prop_assert!(sse(&t) <= sse(&moved) + 1e-9);
        }
    }
}
