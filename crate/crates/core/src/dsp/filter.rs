//! Windowed-sinc low-pass FIR applied forward and backward.

use serde::{Deserialize, Serialize};

use super::envelope::{Envelope, Provenance};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Low-pass design: Hamming-windowed sinc with an odd number of taps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterSpec<F> {
    pub cutoff_hz: F,
    pub taps: usize,
}

impl Default for FilterSpec<f64> {
    fn default() -> Self {
        Self {
            cutoff_hz: 10.0,
            taps: 101,
        }
    }
}

impl<F: Scalar> FilterSpec<F> {
    pub fn validate(&self, sample_rate: F) -> Result<()> {
        if self.taps == 0 || self.taps.is_multiple_of(2) {
            return Err(Error::FilterSpec(format!("taps must be odd and positive, got {}", self.taps)));
        }
        let nyquist = sample_rate / F::lit(2.0);
        if !(self.cutoff_hz > F::zero() && self.cutoff_hz < nyquist) {
            return Err(Error::FilterSpec(format!(
                "cutoff {} Hz must lie in (0, {nyquist}) Hz",
                self.cutoff_hz
            )));
        }
        Ok(())
    }

    /// Impulse response normalized to unit DC gain.
    pub fn design(&self, sample_rate: F) -> Result<Vec<F>> {
        self.validate(sample_rate)?;
        let fc = self.cutoff_hz / sample_rate;
        let two = F::lit(2.0);
        let center = F::from_usize_lossy(self.taps / 2);
        let last = F::from_usize_lossy(self.taps.max(2) - 1);
        let mut h: Vec<F> = (0..self.taps)
            .map(|n| {
                let nf = F::from_usize_lossy(n);
                let x = nf - center;
                let sinc = if x == F::zero() {
                    two * fc
                } else {
                    (two * F::PI() * fc * x).sin() / (F::PI() * x)
                };
                let window = if self.taps == 1 {
                    F::one()
                } else {
                    F::lit(0.54) - F::lit(0.46) * (two * F::PI() * nf / last).cos()
                };
                sinc * window
            })
            .collect();
        let dc: F = h.iter().copied().sum();
        h.iter_mut().for_each(|v| *v = *v / dc);
        Ok(h)
    }
}

/// Zero-phase low-pass: the symmetric FIR is applied once forward and once
/// backward over a reflect-padded copy, so the net response is `|H(f)|²`.
pub fn lowpass<F: Scalar>(env: &Envelope<F>, spec: &FilterSpec<F>) -> Result<Envelope<F>> {
    let h = spec.design(env.sample_rate)?;
    let x = env.samples();
    if x.is_empty() {
        return Envelope::with_provenance(env.sample_rate, Vec::new(), Provenance::Filtered);
    }
    // forward + backward response spans 2·taps − 1 samples
    let pad = spec.taps - 1;
    let padded: Vec<F> = (0..x.len() + 2 * pad)
        .map(|k| x[reflect_index(k as isize - pad as isize, x.len())])
        .collect();
    let forward = convolve_centered(&padded, &h);
    let mut rev: Vec<F> = forward.into_iter().rev().collect();
    rev = convolve_centered(&rev, &h);
    rev.reverse();
    let out = rev[pad..pad + x.len()].to_vec();
    Envelope::with_provenance(env.sample_rate, out, Provenance::Filtered)
}

/// Mirror an out-of-range index back into `[0, n)` without repeating the edge sample.
fn reflect_index(k: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let mut m = k.rem_euclid(period);
    if m >= n as isize {
        m = period - m;
    }
    m as usize
}

/// `y[n] = Σ h[k] x[n + taps/2 - k]`, holding edge values outside `x`.
///
/// Only the outer `taps/2` outputs see held values; with `taps - 1` samples of
/// padding those never reach the unpadded region after two passes.
fn convolve_centered<F: Scalar>(x: &[F], h: &[F]) -> Vec<F> {
    let half = h.len() / 2;
    (0..x.len())
        .map(|n| {
            let mut acc = F::zero();
            for (k, &hk) in h.iter().enumerate() {
                let idx = n as isize + half as isize - k as isize;
                let v = if idx < 0 {
                    x[0]
                } else if idx as usize >= x.len() {
                    x[x.len() - 1]
                } else {
                    x[idx as usize]
                };
                acc = acc + hk * v;
            }
            acc
        })
        .collect()
}

/// Complex frequency response magnitude of `h` at `freq` (Hz).
pub fn response_magnitude<F: Scalar>(h: &[F], freq: F, sample_rate: F) -> F {
    let w = F::lit(2.0) * F::PI() * freq / sample_rate;
    let (re, im) = h.iter().enumerate().fold((F::zero(), F::zero()), |(re, im), (k, &hk)| {
        let ph = w * F::from_usize_lossy(k);
        (re + hk * ph.cos(), im - hk * ph.sin())
    });
    (re * re + im * im).sqrt()
}
