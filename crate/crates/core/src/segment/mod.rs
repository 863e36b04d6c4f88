//! Template-free repetition counting.
//!
//! The envelope is partitioned into motion cycles by alternating two
//! sub-problems: the optimal length-constrained partition against the
//! current template (dynamic programming over DTW costs), and a new
//! template formed as the length-weighted mean of the spline-warped
//! segments. Iteration starts from an all-zero template and stops once
//! successive templates are closer than a threshold under DTW.

mod dtw;
mod partition;
mod template;

use serde::{Deserialize, Serialize};

pub use dtw::{dtw, dtw_with, LanedPrefixDtw, PointCost, PrefixDtw, LANES};
pub use partition::{dist_to_template, optimal_partition, LengthWindow, Segmentation};
pub use template::update_template;


use crate::error::{Error, Result};
use crate::scalar::{min_max, Scalar};

/// Parameters of the alternating segmentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmenterConfig<F> {
    /// Shortest admissible cycle (s).
    pub t_min_s: F,
    /// Longest admissible cycle (s).
    pub t_max_s: F,
    /// Samples per second of the envelope.
    pub sample_rate: F,
    /// Template length; defaults to the mid-range cycle length in samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_len: Option<usize>,
    /// DTW distance between successive templates that ends iteration;
    /// defaults to 1% of the signal range per template sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conv_threshold: Option<F>,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub cost: PointCost,
}

fn default_max_iter() -> usize {
    50
}

impl<F: Scalar> SegmenterConfig<F> {
    pub fn new(t_min_s: F, t_max_s: F, sample_rate: F) -> Self {
        Self {
            t_min_s,
            t_max_s,
            sample_rate,
            template_len: None,
            conv_threshold: None,
            max_iter: default_max_iter(),
            cost: PointCost::Absolute,
        }
    }

    /// Cycle length bounds in samples: `⌈t_min·C⌉` and `⌊t_max·C⌋`.
    ///
    /// A relative slack of 1e-9 absorbs representation error so that,
    /// e.g., 0.29 s at 100 Hz gives 29 samples rather than 30.
    pub fn window(&self) -> LengthWindow {
        let slack = F::lit(1e-9);
        let lo = self.t_min_s * self.sample_rate;
        let hi = self.t_max_s * self.sample_rate;
        LengthWindow {
            min_len: (lo * (F::one() - slack)).ceil().to_usize().unwrap_or(0),
            max_len: (hi * (F::one() + slack)).floor().to_usize().unwrap_or(0),
        }
    }

    pub fn template_len(&self) -> usize {
        self.template_len.unwrap_or_else(|| {
            (F::lit(0.5) * (self.t_max_s + self.t_min_s) * self.sample_rate)
                .round()
                .to_usize()
                .unwrap_or(0)
        })
    }

    /// Convergence threshold for a particular input sequence.
    pub fn threshold_for(&self, x: &[F]) -> F {
        self.conv_threshold.unwrap_or_else(|| {
            let (lo, hi) = min_max(x);
            let range = if x.is_empty() { F::zero() } else { hi - lo };
            F::lit(0.01) * F::from_usize_lossy(self.template_len()) * range
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min_s > F::zero() && self.t_min_s < self.t_max_s) {
            return Err(Error::Config("need 0 < t_min < t_max".into()));
        }
        if !(self.sample_rate > F::zero()) {
            return Err(Error::Config("sample_rate must be positive".into()));
        }
        let w = self.window();
        if w.min_len < 2 {
            return Err(Error::Config(format!(
                "t_min·C must cover at least 2 samples, got {}",
                w.min_len
            )));
        }
        if w.max_len < w.min_len {
            return Err(Error::Config("no integer cycle length fits in [t_min, t_max]".into()));
        }
        if self.template_len() < 2 {
            return Err(Error::Config("template length must be at least 2".into()));
        }
        if let Some(t) = self.conv_threshold {
            if !(t >= F::zero()) {
                return Err(Error::Config("conv_threshold must be non-negative".into()));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::Config("max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of [`segment_motions`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationResult<F> {
    /// Final partition; its `total_cost` is measured against the template it was fitted to.
    pub segmentation: Segmentation<F>,
    /// Template refined from the final partition.
    pub template: Vec<F>,
    pub iterations: usize,
    pub converged: bool,
    /// Partition cost at each iteration (not necessarily monotone).
    pub per_iteration_costs: Vec<F>,
    /// DTW distance between successive templates at each iteration.
    pub template_deltas: Vec<F>,
}

impl<F> SegmentationResult<F> {
    pub fn count(&self) -> usize {
        self.segmentation.boundaries.len() - 1
    }
}

/// Optimal segmentation of `x` given a template, under `cfg`'s length window.
pub fn update_segmentation<F: Scalar>(x: &[F], template: &[F], cfg: &SegmenterConfig<F>) -> Result<Segmentation<F>> {
    cfg.validate()?;
    optimal_partition(x, template, cfg.window(), cfg.cost)
}

/// Jointly estimate cycle boundaries and the motion template.
pub fn segment_motions<F: Scalar>(x: &[F], cfg: &SegmenterConfig<F>) -> Result<SegmentationResult<F>> {
    cfg.validate()?;
    if let Some(k) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::Data(format!("sample {k} is not finite")));
    }
    let window = cfg.window();
    let m = cfg.template_len();
    let threshold = cfg.threshold_for(x);

    let mut template = vec![F::zero(); m];
    let mut costs = Vec::new();
    let mut deltas = Vec::new();
    let mut converged = false;
    let mut segmentation;
    loop {
        segmentation = optimal_partition(x, &template, window, cfg.cost)?;
        let next = update_template(x, &segmentation, m)?;
        let delta = dtw_with(&next, &template, cfg.cost)?;
        costs.push(segmentation.total_cost);
        deltas.push(delta);
        template = next;
        if delta < threshold {
            converged = true;
            break;
        }
        if costs.len() >= cfg.max_iter {
            break;
        }
    }
    Ok(SegmentationResult {
        segmentation,
        template,
        iterations: costs.len(),
        converged,
        per_iteration_costs: costs,
        template_deltas: deltas,
    })
}

/// Signed counting error `(N_est - N_truth) / N_truth × 100`.
pub fn count_error_ratio<F: Scalar>(n_est: usize, n_truth: usize) -> Result<F> {
    if n_truth == 0 {
        return Err(Error::Domain("ground-truth count must be at least 1".into()));
    }
    let est = F::from_usize_lossy(n_est);
    let truth = F::from_usize_lossy(n_truth);
    Ok((est - truth) / truth * F::lit(100.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_from_seconds() {
        let cfg = SegmenterConfig::new(0.5, 2.0, 100.0);
        assert_eq!(cfg.window(), LengthWindow { min_len: 50, max_len: 200 });
        assert_eq!(cfg.template_len(), 125);
        let cfg = SegmenterConfig::new(0.29, 0.57, 100.0);
        assert_eq!(cfg.window(), LengthWindow { min_len: 29, max_len: 57 });
        let cfg = SegmenterConfig::new(0.015, 0.045, 100.0);
        assert_eq!(cfg.window(), LengthWindow { min_len: 2, max_len: 4 });
    }

    #[test]
    fn config_validation() {
        assert!(SegmenterConfig::new(1.0, 0.5, 100.0).validate().is_err());
        assert!(SegmenterConfig::new(0.01, 0.5, 100.0).validate().is_err());
        let mut c = SegmenterConfig::new(0.5, 1.0, 100.0);
        c.max_iter = 0;
        assert!(c.validate().is_err());
        c.max_iter = 3;
        c.conv_threshold = Some(-1.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn error_ratio_examples() {
        assert_eq!(count_error_ratio::<f64>(20, 20).unwrap(), 0.0);
        assert_eq!(count_error_ratio::<f64>(19, 20).unwrap(), -5.0);
        assert_eq!(count_error_ratio::<f64>(21, 20).unwrap(), 5.0);
        assert!(matches!(count_error_ratio::<f64>(3, 0), Err(Error::Domain(_))));
    }

    fn pulse_train(cycles: usize, len: usize) -> Vec<f64> {
        (0..cycles * len)
            .map(|k| {
                let u = (k % len) as f64 / len as f64;
                1.0 + 0.5 * (1.0 - (2.0 * std::f64::consts::PI * u).cos()) + 0.3 * (u * 7.0).sin().powi(2)
            })
            .collect()
    }

    #[test]
    fn single_iteration_contract() {
        let x = pulse_train(6, 10);
        let mut cfg = SegmenterConfig::new(0.07, 0.13, 100.0);
        cfg.max_iter = 1;
        cfg.conv_threshold = Some(0.0);
        let r = segment_motions(&x, &cfg).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(!r.converged);
        assert_eq!(r.per_iteration_costs.len(), 1);
    }

    #[test]
    fn deterministic_and_within_window() {
        let x = pulse_train(8, 20);
        let cfg = SegmenterConfig::new(0.12, 0.3, 100.0);
        let a = segment_motions(&x, &cfg).unwrap();
        let b = segment_motions(&x, &cfg).unwrap();
        assert_eq!(a, b);
        let w = cfg.window();
        assert!(a.segmentation.lengths().all(|l| w.contains(l)));
        assert_eq!(a.segmentation.boundaries[0], 0);
        assert_eq!(*a.segmentation.boundaries.last().unwrap(), x.len());
        if a.converged {
            assert!(*a.template_deltas.last().unwrap() < cfg.threshold_for(&x));
        }
    }

    #[test]
    fn segmentation_step_never_worse_than_previous_partition() {
        let x = pulse_train(7, 15);
        let cfg = SegmenterConfig::new(0.1, 0.25, 100.0);
        let m = cfg.template_len();
        let first = update_segmentation(&x, &vec![0.0; m], &cfg).unwrap();
        let tpl = update_template(&x, &first, m).unwrap();
        let prev_cost = dist_to_template(&x, &first, &tpl, cfg.cost).unwrap();
        let second = update_segmentation(&x, &tpl, &cfg).unwrap();
        assert!(second.total_cost <= prev_cost);
    }

    #[test]
    fn infeasible_short_trace() {
        let cfg = SegmenterConfig::new(0.5, 2.0, 100.0);
        assert!(matches!(segment_motions(&[1.0; 30], &cfg), Err(Error::Infeasible { .. })));
    }
}
