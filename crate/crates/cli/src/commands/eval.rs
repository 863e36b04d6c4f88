use std::path::PathBuf;

use motionfi::eval::cross_validate;

use crate::pipeline::load_dataset;
use crate::{emit, CliResult, PipelineConfig};

#[derive(Debug, Clone, Default)]
pub struct EvalArgs {
    /// Feature CSV or a directory of labelled traces.
    pub data: PathBuf,
    pub folds: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Stratified k-fold evaluation; trace directories also get per-trace counting error ratios.
pub fn cmd_eval(args: &EvalArgs, cfg: &PipelineConfig) -> CliResult<motionfi::EvalReport> {
    let data = load_dataset(&args.data, cfg)?;
    let folds = args.folds.unwrap_or(cfg.eval.folds);
    let mut report = cross_validate(&data.dataset, folds, &cfg.smo(), cfg.seed())?;
    report.count_error_ratios = data.error_ratios;
    emit(args.out.as_deref(), &report)?;
    Ok(report)
}
