//! Natural cubic spline resampling.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Natural cubic spline through equally spaced knots.
#[derive(Debug, Clone)]
pub struct NaturalSpline<F> {
    values: Vec<F>,
    /// Second derivatives at the knots (unit knot spacing).
    second: Vec<F>,
}

impl<F: Scalar> NaturalSpline<F> {
    pub fn new(values: &[F]) -> Result<Self> {
        let n = values.len();
        if n < 2 {
            return Err(Error::Size { min: 2, got: n });
        }
        let mut second = vec![F::zero(); n];
        if n > 2 {
            // Thomas algorithm for M[i-1] + 4 M[i] + M[i+1] = 6 Δ²s[i], i = 1..n-2
            let six = F::lit(6.0);
            let four = F::lit(4.0);
            let inner = n - 2;
            let mut c = vec![F::zero(); inner];
            let mut d = vec![F::zero(); inner];
            for k in 0..inner {
                let i = k + 1;
                let rhs = six * (values[i + 1] - values[i] - values[i] + values[i - 1]);
                if k == 0 {
                    c[k] = F::one() / four;
                    d[k] = rhs / four;
                } else {
                    let denom = four - c[k - 1];
                    c[k] = F::one() / denom;
                    d[k] = (rhs - d[k - 1]) / denom;
                }
            }
            second[inner] = d[inner - 1];
            for k in (0..inner - 1).rev() {
                second[k + 1] = d[k] - c[k] * second[k + 2];
            }
        }
        Ok(Self {
            values: values.to_vec(),
            second,
        })
    }

    /// Value on the interval starting at knot `k`, at local offset `t ∈ [0, 1]`.
    pub fn eval_local(&self, k: usize, t: F) -> F {
        if t == F::zero() {
            return self.values[k];
        }
        let u = F::one() - t;
        let six = F::lit(6.0);
        u * self.values[k]
            + t * self.values[k + 1]
            + ((u * u * u - u) * self.second[k] + (t * t * t - t) * self.second[k + 1]) / six
    }

    /// Value at fractional knot position `x ∈ [0, n-1]`.
    pub fn eval(&self, x: F) -> F {
        let last = self.values.len() - 1;
        let xc = x.max(F::zero()).min(F::from_usize_lossy(last));
        let k = xc.floor().to_usize().unwrap_or(0).min(last - 1);
        self.eval_local(k, xc - F::from_usize_lossy(k))
    }
}

/// Stretch or compress `s` to `m` samples along a natural cubic spline.
///
/// The knots sit at `k/(|s|-1)` and the output at `j/(m-1)` on the unit
/// interval; positions are located with integer arithmetic so that knots
/// shared by both grids reproduce the input exactly.
pub fn warp_spline<F: Scalar>(s: &[F], m: usize) -> Result<Vec<F>> {
    if m < 2 {
        return Err(Error::Size { min: 2, got: m });
    }
    let spline = NaturalSpline::new(s)?;
    let n1 = s.len() - 1;
    let m1 = m - 1;
    let mut out: Vec<F> = (0..m)
        .map(|j| {
            let num = j * n1;
            let k = num / m1;
            let rem = num % m1;
            if k == n1 {
                s[n1]
            } else {
                spline.eval_local(k, F::from_usize_lossy(rem) / F::from_usize_lossy(m1))
            }
        })
        .collect();
    out[0] = s[0];
    out[m1] = s[n1];
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_length() {
        let s = [0.3, -1.0, 2.5, 4.0, 0.0];
        assert_eq!(warp_spline(&s, 5).unwrap(), s.to_vec());
    }

    #[test]
    fn linear_ramp_matches_linear_interpolation() {
        let out = warp_spline(&[0.0, 1.0, 2.0, 3.0], 7).unwrap();
        // oracle: direct linear interpolation of the ramp
        let oracle: Vec<f64> = (0..7).map(|j| 3.0 * j as f64 / 6.0).collect();
        for (a, b) in out.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(oracle, vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn two_point_input_is_linear() {
        assert_eq!(warp_spline(&[1.0, 3.0], 3).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn size_errors() {
        assert!(matches!(warp_spline(&[1.0], 4), Err(Error::Size { .. })));
        assert!(matches!(warp_spline(&[1.0, 2.0], 1), Err(Error::Size { .. })));
    }

    #[test]
    fn natural_boundary_and_knot_interpolation() {
        let s = [0.0, 1.0, 0.0, -1.0, 0.0, 2.0];
        let sp = NaturalSpline::new(&s).unwrap();
        assert_eq!(sp.second[0], 0.0);
        assert_eq!(sp.second[5], 0.0);
        for (k, v) in s.iter().enumerate() {
            assert!((sp.eval(k as f64) - v).abs() < 1e-12);
        }
        // C2 continuity at an interior knot, by finite differences
        let h = 1e-4;
        let d2 = |x: f64| (sp.eval(x + h) - 2.0 * sp.eval(x) + sp.eval(x - h)) / (h * h);
        assert!((d2(2.0 + 10.0 * h) - d2(2.0 - 10.0 * h)).abs() < 1e-2);
    }

    proptest! {
        #[test]
        fn endpoints_preserved(s in prop::collection::vec(-10.0f64..10.0, 2..30), m in 2usize..80) {
            let out = warp_spline(&s, m).unwrap();
            prop_assert_eq!(out.len(), m);
            prop_assert_eq!(out[0], s[0]);
            prop_assert_eq!(out[m - 1], s[s.len() - 1]);
        }

        #[test]
        fn round_trip_on_smooth_input(n in 16usize..64, freq in 0.2f64..1.5, phase in 0.0f64..6.0) {
            let s: Vec<f64> = (0..n)
                .map(|k| 2.0 + (freq * std::f64::consts::PI * k as f64 / (n - 1) as f64 + phase).sin())
                .collect();
            let up = warp_spline(&s, 2 * n).unwrap();
            let back = warp_spline(&up, n).unwrap();
            for (a, b) in s.iter().zip(&back) {
                prop_assert!((a - b).abs() <= 1e-3 * a.abs());
            }
        }
    }
}
