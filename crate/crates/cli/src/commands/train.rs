use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use motionfi::classify::train;
use motionfi::io::{write_dataset, write_json};

use crate::pipeline::load_dataset;
use crate::{emit, CliResult, PipelineConfig, WithPath, REPORT_SCHEMA_VERSION};

#[derive(Debug, Clone, Default)]
pub struct TrainArgs {
    /// Feature CSV or a directory of labelled traces.
    pub data: PathBuf,
    /// Model JSON destination.
    pub out: PathBuf,
    /// Where to write the training report; stdout when absent.
    pub report: Option<PathBuf>,
    /// Also dump the feature table used for training.
    pub features_out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub schema_version: u32,
    pub seed: u64,
    pub model: String,
    pub classes: Vec<String>,
    pub class_counts: Vec<usize>,
    pub n_samples: usize,
    pub c_reg: f64,
    pub training_accuracy: f64,
    pub max_kkt_violation: f64,
    pub all_pairs_converged: bool,
}

pub fn cmd_train(args: &TrainArgs, cfg: &PipelineConfig) -> CliResult<TrainReport> {
    let ds = load_dataset(&args.data, cfg)?.dataset;
    if let Some(p) = &args.features_out {
        write_dataset(p, &ds).at(p)?;
    }
    let model = train(&ds, &cfg.smo())?;
    write_json(&args.out, &model).at(&args.out)?;
    let report = TrainReport {
        schema_version: REPORT_SCHEMA_VERSION,
        seed: cfg.seed(),
        model: args.out.display().to_string(),
        classes: ds.classes.clone(),
        class_counts: ds.class_counts(),
        n_samples: ds.len(),
        c_reg: model.c_reg,
        training_accuracy: model.accuracy(&ds)?,
        max_kkt_violation: model.pairs.iter().fold(0.0, |m, p| m.max(p.kkt_violation)),
        all_pairs_converged: model.pairs.iter().all(|p| p.converged),
    };
    emit(args.report.as_deref(), &report)?;
    Ok(report)
}
