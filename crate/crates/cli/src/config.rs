use serde::{Deserialize, Serialize};

use motionfi::classify::{SmoParams, VoteConfig};
use motionfi::segment::PointCost;
use motionfi::{FilterSpec, SegmenterConfig};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterSection {
    pub cutoff_hz: f64,
    pub taps: usize,
}

impl Default for FilterSection {
    fn default() -> Self {
        let d = FilterSpec::default();
        Self {
            cutoff_hz: d.cutoff_hz,
            taps: d.taps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SegmenterSection {
    pub t_min_s: f64,
    pub t_max_s: f64,
    pub template_len: Option<usize>,
    pub conv_threshold: Option<f64>,
    pub max_iter: usize,
    pub cost: PointCost,
}

impl Default for SegmenterSection {
    fn default() -> Self {
        Self {
            t_min_s: 0.5,
            t_max_s: 2.0,
            template_len: None,
            conv_threshold: None,
            max_iter: 50,
            cost: PointCost::Absolute,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierSection {
    pub c_reg: f64,
    pub tolerance: f64,
    pub vote_k: usize,
}

impl Default for ClassifierSection {
    fn default() -> Self {
        Self {
            c_reg: 1.0,
            tolerance: 1e-3,
            vote_k: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub folds: usize,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self { folds: 10 }
    }
}

/// Everything a command needs besides its input paths.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Master seed; commands fall back to 0 when unset.
    pub seed: Option<u64>,
    pub filter: FilterSection,
    pub segmenter: SegmenterSection,
    pub classifier: ClassifierSection,
    pub eval: EvalSection,
}

impl PipelineConfig {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        Ok(motionfi::io::read_json(path)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn filter_spec(&self) -> FilterSpec {
        FilterSpec {
            cutoff_hz: self.filter.cutoff_hz,
            taps: self.filter.taps,
        }
    }

    pub fn segmenter(&self, sample_rate: f64) -> Result<SegmenterConfig, CliError> {
        let s = &self.segmenter;
        let cfg = SegmenterConfig {
            t_min_s: s.t_min_s,
            t_max_s: s.t_max_s,
            sample_rate,
            template_len: s.template_len,
            conv_threshold: s.conv_threshold,
            max_iter: s.max_iter,
            cost: s.cost,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn smo(&self) -> SmoParams<f64> {
        SmoParams {
            c_reg: self.classifier.c_reg,
            tolerance: self.classifier.tolerance,
            ..SmoParams::default()
        }
    }

    pub fn vote(&self) -> Result<VoteConfig, CliError> {
        let v = VoteConfig {
            k: self.classifier.vote_k,
            seed: self.seed(),
        };
        v.validate()?;
        Ok(v)
    }
}
