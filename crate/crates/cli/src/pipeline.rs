//! Trace → envelope → segmentation → features, shared by the commands.

use std::path::Path;

use motionfi::classify::extract_features;
use motionfi::dsp::{energy, lowpass};
use motionfi::io::{read_trace, TraceMeta};
use motionfi::{Envelope, FeatureVector, IqTrace, LabeledDataset, SegmentationResult};

use crate::{CliResult, PipelineConfig, WithPath};

pub struct Processed {
    pub raw: Envelope,
    pub filtered: Envelope,
    pub result: SegmentationResult,
}

impl Processed {
    pub fn features(&self) -> CliResult<Vec<FeatureVector>> {
        let x = self.filtered.samples();
        Ok(self
            .result
            .segmentation
            .ranges()
            .map(|r| extract_features(&x[r]))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

pub fn process(trace: &IqTrace, cfg: &PipelineConfig) -> CliResult<Processed> {
    let raw = energy(trace)?;
    let filtered = lowpass(&raw, &cfg.filter_spec())?;
    let seg_cfg = cfg.segmenter(trace.sample_rate)?;
    let result = motionfi::segment::segment_motions(filtered.samples(), &seg_cfg)?;
    Ok(Processed { raw, filtered, result })
}

pub fn load_trace(path: &Path) -> CliResult<(IqTrace, Option<TraceMeta<f64>>)> {
    read_trace(path).at(path)
}

/// Features of every segment of every labelled trace, plus each trace's
/// counting error ratio when its ground truth records a cycle count.
pub struct TraceDataset {
    pub dataset: LabeledDataset,
    pub error_ratios: Vec<f64>,
}

/// Segment every labelled trace and collect one feature vector per segment.
pub fn dataset_from_traces(paths: &[std::path::PathBuf], cfg: &PipelineConfig) -> CliResult<TraceDataset> {
    use rayon::prelude::*;
    let per_trace = paths
        .par_iter()
        .map(|p| {
            let (trace, _) = load_trace(p)?;
            let label = trace
                .ground_truth
                .as_ref()
                .and_then(|g| g.label.clone())
                .ok_or_else(|| crate::CliError::input(format!("{}: sidecar has no motion label", p.display())))?;
            let processed = process(&trace, cfg).at(p)?;
            let feats = processed.features().at(p)?;
            let truth = trace.ground_truth.as_ref().map(|g| g.n_cycles).filter(|&n| n > 0);
            let ratio: Option<f64> = truth
                .map(|t| motionfi::segment::count_error_ratio(processed.result.count(), t))
                .transpose()?;
            Ok((label, feats, ratio))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut dataset = LabeledDataset::new(Vec::new());
    let mut error_ratios = Vec::new();
    for (label, feats, ratio) in per_trace {
        for f in feats {
            dataset.push(f, &label);
        }
        error_ratios.extend(ratio);
    }
    Ok(TraceDataset { dataset, error_ratios })
}

/// A CSV path is read as a feature table; a directory as labelled traces.
pub fn load_dataset(path: &Path, cfg: &PipelineConfig) -> CliResult<TraceDataset> {
    if path.is_dir() {
        let traces = crate::list_files(path, ".csv", &[])?;
        dataset_from_traces(&traces, cfg)
    } else {
        Ok(TraceDataset {
            dataset: motionfi::io::read_dataset(path).at(path)?,
            error_ratios: Vec::new(),
        })
    }
}
