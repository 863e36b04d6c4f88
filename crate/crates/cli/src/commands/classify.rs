use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use motionfi::classify::vote_with_rng;
use motionfi::io::read_model;
use motionfi::seed::{derive_seed, rng_for, stream};
use motionfi::OvoSvmModel;

use crate::pipeline::{load_trace, process};
use crate::{emit, ensure_dir, list_files, stem, CliError, CliResult, PipelineConfig, WithPath, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Default)]
pub struct ClassifyArgs {
    /// Trace CSV or a directory of traces.
    pub trace: PathBuf,
    pub model: PathBuf,
    /// Report path (directory for directory input); stdout when absent.
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentLabel {
    pub start: usize,
    pub end: usize,
    pub label: String,
    pub pairwise_wins: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowLabel {
    pub first_segment: usize,
    pub n_segments: usize,
    pub label: String,
    /// Set when the window holds fewer than k segments and the label is
    /// the plurality of what is available.
    pub fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub schema_version: u32,
    pub seed: u64,
    pub trace: String,
    pub k: usize,
    pub segments: Vec<SegmentLabel>,
    pub windows: Vec<WindowLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segment_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ClassifySummary {
    schema_version: u32,
    seed: u64,
    reports: Vec<String>,
    segments: usize,
    windows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    segment_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_accuracy: Option<f64>,
}

/// Label every segment, then vote over consecutive non-overlapping windows of k segments.
pub fn classify_trace(path: &Path, model: &OvoSvmModel, cfg: &PipelineConfig) -> CliResult<ClassifyReport> {
    let vote_cfg = cfg.vote()?;
    let (trace, _) = load_trace(path)?;
    let processed = process(&trace, cfg).at(path)?;
    let feats = processed.features().at(path)?;
    let mut segments = Vec::with_capacity(feats.len());
    for (range, f) in processed.result.segmentation.ranges().zip(&feats) {
        let p = model.predict(f).at(path)?;
        segments.push(SegmentLabel {
            start: range.start,
            end: range.end,
            label: p.label,
            pairwise_wins: p.votes,
        });
    }
    let trace_seed = derive_seed(derive_seed(vote_cfg.seed, stream::VOTE), &stem(path));
    let windows: Vec<WindowLabel> = segments
        .chunks(vote_cfg.k)
        .enumerate()
        .map(|(w, chunk)| {
            let labels: Vec<&str> = chunk.iter().map(|s| s.label.as_str()).collect();
            let mut rng = rng_for(trace_seed, &w.to_string());
            WindowLabel {
                first_segment: w * vote_cfg.k,
                n_segments: chunk.len(),
                label: vote_with_rng(&labels, &mut rng).expect("chunks are non-empty").to_string(),
                fallback: chunk.len() < vote_cfg.k,
            }
        })
        .collect();
    let truth_label = trace.ground_truth.as_ref().and_then(|g| g.label.clone());
    let accuracy = |labels: Vec<&str>| {
        truth_label.as_ref().filter(|_| !labels.is_empty()).map(|t| {
            labels.iter().filter(|l| **l == t.as_str()).count() as f64 / labels.len() as f64
        })
    };
    Ok(ClassifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: vote_cfg.seed,
        trace: path.display().to_string(),
        k: vote_cfg.k,
        segment_accuracy: accuracy(segments.iter().map(|s| s.label.as_str()).collect()),
        window_accuracy: accuracy(windows.iter().map(|w| w.label.as_str()).collect()),
        segments,
        windows,
        truth_label,
    })
}

pub fn cmd_classify(args: &ClassifyArgs, cfg: &PipelineConfig) -> CliResult<Vec<ClassifyReport>> {
    let model: OvoSvmModel = read_model(&args.model).at(&args.model)?;
    if !args.trace.is_dir() {
        let report = classify_trace(&args.trace, &model, cfg)?;
        emit(args.out.as_deref(), &report)?;
        return Ok(vec![report]);
    }
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::input("--out <dir> is required for a directory of traces"))?;
    ensure_dir(out)?;
    let traces = list_files(&args.trace, ".csv", &[])?;
    let reports = traces
        .par_iter()
        .map(|t| {
            let report = classify_trace(t, &model, cfg)?;
            let path = out.join(format!("{}.classify.json", stem(t)));
            motionfi::io::write_json(&path, &report).at(&path)?;
            Ok((path, report))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let pooled = |pick: fn(&ClassifyReport) -> (Option<f64>, usize)| {
        let (mut hit, mut n) = (0.0, 0usize);
        for (_, r) in &reports {
            if let (Some(acc), len) = pick(r) {
                hit += acc * len as f64;
                n += len;
            }
        }
        (n > 0).then(|| hit / n as f64)
    };
    let summary = ClassifySummary {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed(),
        reports: reports.iter().map(|(p, _)| p.display().to_string()).collect(),
        segments: reports.iter().map(|(_, r)| r.segments.len()).sum(),
        windows: reports.iter().map(|(_, r)| r.windows.len()).sum(),
        segment_accuracy: pooled(|r| (r.segment_accuracy, r.segments.len())),
        window_accuracy: pooled(|r| (r.window_accuracy, r.windows.len())),
    };
    let path = out.join("summary.json");
    motionfi::io::write_json(&path, &summary).at(&path)?;
    Ok(reports.into_iter().map(|(_, r)| r).collect())
}
