use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::IqTrace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Raw,
    Filtered,
}

/// Real-valued amplitude sequence at a fixed sample rate.
#[derive(Debug, Clone, PartialEq)]
pub struct Envelope<F> {
    pub sample_rate: F,
    samples: Vec<F>,
    provenance: Provenance,
}

impl<F: Scalar> Envelope<F> {
    /// A raw envelope from arbitrary samples.
    pub fn new(sample_rate: F, samples: Vec<F>) -> Result<Self> {
        Self::with_provenance(sample_rate, samples, Provenance::Raw)
    }

    pub(crate) fn with_provenance(sample_rate: F, samples: Vec<F>, provenance: Provenance) -> Result<Self> {
        if !(sample_rate > F::zero()) {
            return Err(Error::Data("sample_rate must be positive".into()));
        }
        if let Some(k) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("envelope sample {k} is not finite")));
        }
        Ok(Self {
            sample_rate,
            samples,
            provenance,
        })
    }

    pub fn samples(&self) -> &[F] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<F> {
        self.samples
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Signal energy `sqrt(I² + Q²)` per sample.
pub fn energy<F: Scalar>(trace: &IqTrace<F>) -> Result<Envelope<F>> {
    if trace.is_empty() {
        return Err(Error::Size { min: 1, got: 0 });
    }
    let samples = trace
        .i_samples
        .iter()
        .zip(&trace.q_samples)
        .map(|(&i, &q)| (i * i + q * q).sqrt())
        .collect();
    Envelope::with_provenance(trace.sample_rate, samples, Provenance::Raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace(i: Vec<f64>, q: Vec<f64>) -> IqTrace<f64> {
        IqTrace::new(100.0, i, q).unwrap()
    }

    #[test]
    fn energy_examples() {
        let env = energy(&trace(vec![3.0, 0.0, 1.0], vec![4.0, 0.0, 1.0])).unwrap();
        assert_eq!(env.samples(), &[5.0, 0.0, std::f64::consts::SQRT_2]);
        assert_eq!(env.provenance(), Provenance::Raw);
        assert_eq!(env.sample_rate, 100.0);
    }

    #[test]
    fn energy_scale_equivariant() {
        let i = vec![0.3, -1.2, 2.0, 0.7];
        let q = vec![1.1, 0.4, -0.9, 0.0];
        let base = energy(&trace(i.clone(), q.clone())).unwrap();
        let c = 3.7;
        let scaled = energy(&trace(
            i.iter().map(|v| v * c).collect(),
            q.iter().map(|v| v * c).collect(),
        ))
        .unwrap();
        for (a, b) in base.samples().iter().zip(scaled.samples()) {
            assert!((a * c - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_finite_rejected() {
        assert!(Envelope::new(10.0, vec![1.0, f64::NAN]).is_err());
    }
}
