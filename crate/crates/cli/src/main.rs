use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use motionfi_cli::commands::{
    cmd_classify, cmd_count, cmd_eval, cmd_simulate, cmd_train, ClassifyArgs, CountArgs, EvalArgs, PresetArgs,
    SimulateArgs, TrainArgs,
};
use motionfi_cli::{CliResult, PipelineConfig};

/// Repetition counting and motion classification from backscatter envelopes.
#[derive(Parser)]
#[command(name = "motionfi", version)]
struct Cli {
    /// Master seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Pipeline configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Segmenting {
    /// Shortest cycle in seconds.
    #[arg(long)]
    t_min: Option<f64>,
    /// Longest cycle in seconds.
    #[arg(long)]
    t_max: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize an I/Q trace and its ground-truth sidecar.
    Simulate {
        /// Scene JSON, or a directory of scenes.
        #[arg(long, conflicts_with = "preset")]
        scene: Option<PathBuf>,
        /// Built-in motion: SQ, PU, SU, LR, ST, SD or DB.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long, default_value_t = 20, requires = "preset")]
        cycles: usize,
        /// Nominal cycle period in seconds.
        #[arg(long, default_value_t = 1.0, requires = "preset")]
        period: f64,
        /// Relative standard deviation of each cycle's duration.
        #[arg(long, default_value_t = 0.0, requires = "preset")]
        jitter: f64,
        /// Motion-to-noise ratio; noise-free when absent.
        #[arg(long, requires = "preset")]
        snr_db: Option<f64>,
        /// Seconds to synthesize; defaults to the realized motion length.
        #[arg(long)]
        duration: Option<f64>,
        /// Output trace CSV (directory for a scene directory).
        #[arg(long)]
        out: PathBuf,
        /// Also write the simulated scene as JSON.
        #[arg(long)]
        save_scene: Option<PathBuf>,
    },
    /// Count repetitions in a trace.
    Count {
        /// Trace CSV or a directory of traces.
        trace: PathBuf,
        #[command(flatten)]
        seg: Segmenting,
        /// Report JSON (directory for directory input); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Plot CSV with time, raw, filtered and boundary columns.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Train the one-vs-one classifier.
    Train {
        /// Feature CSV or a directory of labelled traces.
        data: PathBuf,
        #[command(flatten)]
        seg: Segmenting,
        /// SVM box constraint C [default: 1].
        #[arg(long)]
        c_reg: Option<f64>,
        /// Model JSON destination.
        #[arg(long)]
        out: PathBuf,
        /// Training report destination; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Write the feature table used for training.
        #[arg(long)]
        features_out: Option<PathBuf>,
    },
    /// Label each segment of a trace and vote over windows of k segments.
    Classify {
        /// Trace CSV or a directory of traces.
        trace: PathBuf,
        /// Model JSON written by `train`.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        seg: Segmenting,
        /// Segments per vote window (odd) [default: 3].
        #[arg(long)]
        k: Option<usize>,
        /// Report JSON (directory for directory input); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stratified k-fold cross-validation.
    Eval {
        /// Feature CSV or a directory of labelled traces.
        data: PathBuf,
        #[command(flatten)]
        seg: Segmenting,
        /// Number of folds [default: 10].
        #[arg(long)]
        folds: Option<usize>,
        /// SVM box constraint C [default: 1].
        #[arg(long)]
        c_reg: Option<f64>,
        /// Report JSON; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn apply_segmenting(cfg: &mut PipelineConfig, seg: &Segmenting) {
    if let Some(v) = seg.t_min {
        cfg.segmenter.t_min_s = v;
    }
    if let Some(v) = seg.t_max {
        cfg.segmenter.t_max_s = v;
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    match cli.command {
        Command::Simulate {
            scene,
            preset,
            cycles,
            period,
            jitter,
            snr_db,
            duration,
            out,
            save_scene,
        } => cmd_simulate(
            &SimulateArgs {
                scene,
                preset: preset.map(|motion| PresetArgs {
                    motion,
                    cycles,
                    period_s: period,
                    jitter,
                    snr_db,
                }),
                duration_s: duration,
                out,
                save_scene,
            },
            &cfg,
        ),
        Command::Count { trace, seg, out, plot } => {
            apply_segmenting(&mut cfg, &seg);
            cmd_count(&CountArgs { trace, out, plot }, &cfg)
        }
        Command::Train {
            data,
            seg,
            c_reg,
            out,
            report,
            features_out,
        } => {
            apply_segmenting(&mut cfg, &seg);
            if let Some(c) = c_reg {
                cfg.classifier.c_reg = c;
            }
            cmd_train(
                &TrainArgs {
                    data,
                    out,
                    report,
                    features_out,
                },
                &cfg,
            )
            .map(|_| ())
        }
        Command::Classify {
            trace,
            model,
            seg,
            k,
            out,
        } => {
            apply_segmenting(&mut cfg, &seg);
            if let Some(k) = k {
                cfg.classifier.vote_k = k;
            }
            cmd_classify(&ClassifyArgs { trace, model, out }, &cfg).map(|_| ())
        }
        Command::Eval {
            data,
            seg,
            folds,
            c_reg,
            out,
        } => {
            apply_segmenting(&mut cfg, &seg);
            if let Some(c) = c_reg {
                cfg.classifier.c_reg = c;
            }
            cmd_eval(&EvalArgs { data, folds, out }, &cfg).map(|_| ())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
