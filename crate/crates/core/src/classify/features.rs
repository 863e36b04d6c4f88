//! Ten shape statistics of a min-max normalized segment.

use serde::{Deserialize, Serialize};

use crate::dsp::normalize;
use crate::error::{Error, Result};
use crate::scalar::{mean, min_max, Scalar};

pub const FEATURE_DIM: usize = 10;

pub const FEATURE_NAMES: [&str; FEATURE_DIM] = [
    "mu", "sigma", "x_max", "x_min", "q25", "q50", "q75", "skew", "kurtosis", "theta",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector<F> {
    pub mu: F,
    /// Population standard deviation.
    pub sigma: F,
    pub x_max: F,
    pub x_min: F,
    pub q25: F,
    pub q50: F,
    pub q75: F,
    pub skew: F,
    pub kurtosis: F,
    /// `Σ x'² / σ²`, unnormalized by length.
    pub theta: F,
}

impl<F: Scalar> FeatureVector<F> {
    pub fn to_array(&self) -> [F; FEATURE_DIM] {
        [
            self.mu,
            self.sigma,
            self.x_max,
            self.x_min,
            self.q25,
            self.q50,
            self.q75,
            self.skew,
            self.kurtosis,
            self.theta,
        ]
    }

    pub fn from_slice(v: &[F]) -> Result<Self> {
        if v.len() != FEATURE_DIM {
            return Err(Error::Shape {
                expected: FEATURE_DIM,
                got: v.len(),
            });
        }
        Ok(Self {
            mu: v[0],
            sigma: v[1],
            x_max: v[2],
            x_min: v[3],
            q25: v[4],
            q50: v[5],
            q75: v[6],
            skew: v[7],
            kurtosis: v[8],
            theta: v[9],
        })
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Quantile by linear interpolation between order statistics at `(n-1)p`.
pub fn quantile<F: Scalar>(sorted: &[F], p: F) -> F {
    let pos = p * F::from_usize_lossy(sorted.len() - 1);
    let lo = pos.floor().to_usize().unwrap_or(0).min(sorted.len() - 1);
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - F::from_usize_lossy(lo);
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Normalize `segment` onto `[0, 1]` and compute its feature vector.
pub fn extract_features<F: Scalar>(segment: &[F]) -> Result<FeatureVector<F>> {
    let x = normalize(segment)?;
    let n = F::from_usize_lossy(x.len());
    let mu = mean(&x);
    let central = |power: i32| x.iter().map(|&v| (v - mu).powi(power)).fold(F::zero(), |a, b| a + b) / n;
    let var = central(2);
    let sigma = var.sqrt();
    if !(sigma > F::zero()) {
        return Err(Error::DegenerateRange);
    }
    let mut sorted = x.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite after normalization"));
    let (x_min, x_max) = min_max(&x);
    let energy = x.iter().map(|&v| v * v).fold(F::zero(), |a, b| a + b);
    Ok(FeatureVector {
        mu,
        sigma,
        x_max,
        x_min,
        q25: quantile(&sorted, F::lit(0.25)),
        q50: quantile(&sorted, F::lit(0.5)),
        q75: quantile(&sorted, F::lit(0.75)),
        skew: central(3) / (var * sigma),
        kurtosis: central(4) / (var * var),
        theta: energy / var,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_point_segment() {
        let f = extract_features(&[3.0f64, 7.0]).unwrap();
        assert_eq!(f.mu, 0.5);
        assert_eq!((f.x_min, f.x_max), (0.0, 1.0));
        assert_eq!(f.q50, 0.5);
    }

    #[test]
    fn uniform_grid_kurtosis() {
        // central moments by hand: m2 = 0.125, m4 = 0.0265625
        let f = extract_features(&[0.0f64, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert!((f.kurtosis - 1.7).abs() < 1e-12);
        assert!(f.skew.abs() < 1e-12);
        assert!((f.sigma - 0.125f64.sqrt()).abs() < 1e-15);
        assert!((f.theta - (0.0625 + 0.25 + 0.5625 + 1.0) / 0.125).abs() < 1e-12);
        assert_eq!((f.q25, f.q50, f.q75), (0.25, 0.5, 0.75));
    }

    #[test]
    fn constant_segment_rejected() {
        assert!(matches!(extract_features(&[2.0; 8]), Err(Error::DegenerateRange)));
    }

    #[test]
    fn quantile_interpolates() {
        let s = [1.0, 2.0, 4.0, 8.0];
        assert_eq!(quantile(&s, 0.5), 3.0);
        assert_eq!(quantile(&s, 0.25), 1.75);
        assert_eq!(quantile(&s, 1.0), 8.0);
    }

    #[test]
    fn symmetric_segment_has_zero_skew() {
        let x: Vec<f64> = (0..41).map(|k| ((k as f64 - 20.0) / 20.0).powi(2)).collect();
        let mut y = x.clone();
        y.extend(x.iter().map(|v| 2.0 - v));
        assert!(extract_features(&y).unwrap().skew.abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn invariant_to_positive_affine_maps(
            x in prop::collection::vec(-10.0f64..10.0, 4..60),
            a in 0.05f64..20.0,
            b in -50.0f64..50.0,
        ) {
            let (lo, hi) = min_max(&x);
            prop_assume!(hi - lo > 1e-3);
            let f = extract_features(&x).unwrap();
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            let g = extract_features(&y).unwrap();
            for (u, v) in f.to_array().iter().zip(g.to_array()) {
                prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0), "{} vs {}", u, v);
            }
            prop_assert!(f.q25 <= f.q50 && f.q50 <= f.q75);
            prop_assert_eq!((f.x_min, f.x_max), (0.0, 1.0));
        }
    }
}
