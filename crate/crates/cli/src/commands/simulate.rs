use std::path::{Path, PathBuf};

use rayon::prelude::*;

use motionfi::io::{read_scene, write_json, write_trace};
use motionfi::seed::derive_seed;
use motionfi::sim::{synth_cycles, synth_trace, MotionKind};
use motionfi::Scene;

use crate::{ensure_dir, list_files, stem, CliError, CliResult, PipelineConfig, WithPath};

#[derive(Debug, Clone, Default)]
pub struct PresetArgs {
    pub motion: String,
    pub cycles: usize,
    pub period_s: f64,
    pub jitter: f64,
    pub snr_db: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct SimulateArgs {
    /// Scene JSON file or a directory of them.
    pub scene: Option<PathBuf>,
    pub preset: Option<PresetArgs>,
    /// Seconds to synthesize; the realized motion length when absent.
    pub duration_s: Option<f64>,
    /// Trace CSV, or a directory when `scene` is one.
    pub out: PathBuf,
    /// Also write the scene that was simulated.
    pub save_scene: Option<PathBuf>,
}

fn preset_scene(p: &PresetArgs, seed: u64) -> CliResult<Scene> {
    let kind: MotionKind = p.motion.parse()?;
    let mut scene = kind.scene(p.cycles, p.period_s, p.jitter, seed)?;
    if let Some(snr) = p.snr_db {
        scene.noise_sigma = scene.noise_sigma_at_snr(snr)?;
    }
    Ok(scene)
}

fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(parent) => ensure_dir(parent),
        None => Ok(()),
    }
}

fn save_scene(scene: &Scene, path: &Path) -> CliResult<()> {
    ensure_parent(path)?;
    write_json(path, scene).at(path)
}

fn simulate_one(scene: &Scene, duration: Option<f64>, out: &Path) -> CliResult<()> {
    ensure_parent(out)?;
    let trace = match duration {
        Some(d) => synth_trace(scene, d)?,
        None => synth_cycles(scene)?,
    };
    write_trace(out, &trace, Some(scene.rng_seed)).at(out)
}

/// Synthesize traces. An explicit seed replaces the scene's own; for a
/// directory each scene gets a sub-seed keyed by its file stem.
pub fn cmd_simulate(args: &SimulateArgs, cfg: &PipelineConfig) -> CliResult<()> {
    match (&args.scene, &args.preset) {
        (Some(_), Some(_)) => Err(CliError::input("give either a scene or a preset, not both")),
        (None, None) => Err(CliError::input("a scene file or a preset is required")),
        (None, Some(p)) => {
            let scene = preset_scene(p, cfg.seed())?;
            if let Some(path) = &args.save_scene {
                save_scene(&scene, path)?;
            }
            simulate_one(&scene, args.duration_s, &args.out)
        }
        (Some(path), None) if path.is_dir() => {
            let scenes = list_files(path, ".json", &[".meta.json"])?;
            ensure_dir(&args.out)?;
            scenes.par_iter().try_for_each(|sp| {
                let mut scene: Scene = read_scene(sp).at(sp)?;
                let name = stem(sp);
                if let Some(seed) = cfg.seed {
                    scene.rng_seed = derive_seed(seed, &name);
                }
                simulate_one(&scene, args.duration_s, &args.out.join(format!("{name}.csv"))).at(sp)
            })
        }
        (Some(path), None) => {
            let mut scene: Scene = read_scene(path).at(path)?;
            if let Some(seed) = cfg.seed {
                scene.rng_seed = seed;
            }
            if let Some(p) = &args.save_scene {
                save_scene(&scene, p)?;
            }
            simulate_one(&scene, args.duration_s, &args.out).at(path)
        }
    }
}
