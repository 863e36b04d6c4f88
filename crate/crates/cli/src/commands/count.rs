use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use motionfi::io::write_atomic;
use motionfi::segment::count_error_ratio;

use crate::pipeline::{load_trace, process, Processed};
use crate::{emit, ensure_dir, list_files, stem, CliError, CliResult, PipelineConfig, WithPath, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Default)]
pub struct CountArgs {
    /// Trace CSV or a directory of traces.
    pub trace: PathBuf,
    /// Report path (directory for directory input); stdout when absent.
    pub out: Option<PathBuf>,
    /// Plot CSV path (directory for directory input).
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub schema_version: u32,
    pub seed: u64,
    pub trace: String,
    pub sample_rate: f64,
    pub n_samples: usize,
    pub t_min_s: f64,
    pub t_max_s: f64,
    pub count: usize,
    pub boundaries: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth_count: Option<usize>,
    /// Signed percentage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_ratio: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub per_iteration_costs: Vec<f64>,
    pub template_deltas: Vec<f64>,
    pub template: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountSummary {
    pub schema_version: u32,
    pub seed: u64,
    pub reports: Vec<String>,
    pub error_ratios: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_abs_error_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_abs_error_ratio: Option<f64>,
}

fn plot_csv(p: &Processed) -> Vec<u8> {
    let fs = p.raw.sample_rate;
    let mut marks = vec![0u8; p.raw.len()];
    for &b in &p.result.segmentation.boundaries {
        if b < marks.len() {
            marks[b] = 1;
        }
    }
    let mut out = String::from("time,raw,filtered,boundary\n");
    for (k, ((r, f), m)) in p.raw.samples().iter().zip(p.filtered.samples()).zip(&marks).enumerate() {
        out.push_str(&format!("{},{r},{f},{m}\n", k as f64 / fs));
    }
    out.into_bytes()
}

/// Count one trace; the plot CSV is written when `plot` is given.
pub fn count_trace(path: &Path, cfg: &PipelineConfig, plot: Option<&Path>) -> CliResult<CountReport> {
    let (trace, _) = load_trace(path)?;
    let processed = process(&trace, cfg).at(path)?;
    if let Some(plot) = plot {
        write_atomic(plot, &plot_csv(&processed)).at(plot)?;
    }
    let truth_count = trace.ground_truth.as_ref().map(|g| g.n_cycles).filter(|&n| n > 0);
    let count = processed.result.count();
    let error_ratio = truth_count.map(|t| count_error_ratio(count, t)).transpose()?;
    let r = processed.result;
    Ok(CountReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed(),
        trace: path.display().to_string(),
        sample_rate: trace.sample_rate,
        n_samples: trace.len(),
        t_min_s: cfg.segmenter.t_min_s,
        t_max_s: cfg.segmenter.t_max_s,
        count,
        boundaries: r.segmentation.boundaries,
        truth_count,
        error_ratio,
        iterations: r.iterations,
        converged: r.converged,
        per_iteration_costs: r.per_iteration_costs,
        template_deltas: r.template_deltas,
        template: r.template,
    })
}

pub fn cmd_count(args: &CountArgs, cfg: &PipelineConfig) -> CliResult<()> {
    if !args.trace.is_dir() {
        let report = count_trace(&args.trace, cfg, args.plot.as_deref())?;
        return emit(args.out.as_deref(), &report);
    }
    let out = args
        .out
        .as_ref()
        .ok_or_else(|| CliError::input("--out <dir> is required for a directory of traces"))?;
    ensure_dir(out)?;
    if let Some(p) = &args.plot {
        ensure_dir(p)?;
    }
    let traces = list_files(&args.trace, ".csv", &[])?;
    let reports = traces
        .par_iter()
        .map(|t| {
            let name = stem(t);
            let plot = args.plot.as_ref().map(|p| p.join(format!("{name}.plot.csv")));
            let report = count_trace(t, cfg, plot.as_deref())?;
            let path = out.join(format!("{name}.count.json"));
            motionfi::io::write_json(&path, &report).at(&path)?;
            Ok((path, report))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let error_ratios: Vec<f64> = reports.iter().filter_map(|(_, r)| r.error_ratio).collect();
    let n = error_ratios.len() as f64;
    let summary = CountSummary {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed(),
        reports: reports.iter().map(|(p, _)| p.display().to_string()).collect(),
        mean_abs_error_ratio: (n > 0.0).then(|| error_ratios.iter().map(|e| e.abs()).sum::<f64>() / n),
        max_abs_error_ratio: (n > 0.0).then(|| error_ratios.iter().fold(0.0, |m: f64, e| m.max(e.abs()))),
        error_ratios,
    };
    let path = out.join("summary.json");
    motionfi::io::write_json(&path, &summary).at(&path)
}
