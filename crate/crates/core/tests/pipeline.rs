use motionfi::dsp::{energy, lowpass, FilterSpec};
use motionfi::segment::{segment_motions, SegmenterConfig};
use motionfi::sim::{synth_cycles, synth_trace, DisplacementProfile, MotionKind, Scatterer};
use motionfi::{LinkBudget, Scene};
use num_complex::Complex;
use std::f64::consts::PI;

fn tag_power(link: &LinkBudget) -> f64 {
    // matched/short loads: reflection 1 vs 0
    let delta = link.lambda.powi(2) / (4.0 * PI) * link.g_tag.powi(2);
    link.p_tx * link.g_tx * delta / (4.0 * PI * link.d.powi(2))
}

fn one_scatterer(n_cycles: usize, swing: f64, coef: Complex<f64>) -> Scene {
    let mut scene = MotionKind::Squat.scene(n_cycles, 1.0, 0.0, 3).unwrap();
    scene.scatterers = vec![Scatterer {
        base_amplitude: coef,
        path_fn: DisplacementProfile::from_fn(2049, 1.0, |u| 0.5 * swing * (1.0 - (2.0 * PI * u).cos())),
        period_jitter: 0.0,
    }];
    scene
}

#[test]
fn filtered_envelope_tracks_analytic_envelope() {
    let coef = Complex::new(0.35, 0.2);
    let swing = 0.12;
    let scene = one_scatterer(10, swing, coef);
    let trace = synth_cycles(&scene).unwrap();
    let env = lowpass(&energy(&trace).unwrap(), &FilterSpec::default()).unwrap();

    let p_tag = tag_power(&scene.link);
    let fs = scene.carrier.sample_rate;
    let lambda = scene.link.lambda;
    let analytic: Vec<f64> = (0..env.len())
        .map(|k| {
            let t = k as f64 / fs;
            let d = 0.5 * swing * (1.0 - (2.0 * PI * t).cos());
            let z = Complex::new(scene.static_power.sqrt(), 0.0)
                + coef * p_tag.sqrt() * Complex::from_polar(1.0, -2.0 * PI * d / lambda);
            scene.envelope_scale * z.norm() / scene.static_power.sqrt()
        })
        .collect();
    let n = analytic.len() as f64;
    let rms_err = (env.samples().iter().zip(&analytic).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / n).sqrt();
    let rms = (analytic.iter().map(|a| a * a).sum::<f64>() / n).sqrt();
    let (lo, hi) = analytic.iter().fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(rms_err / rms < 0.02, "{}", rms_err / rms);
    assert!(rms_err / (hi - lo) < 0.02, "{}", rms_err / (hi - lo));
}

fn count_preset(kind: MotionKind, seed: u64, jitter: f64, snr_db: Option<f64>, t_max: f64) -> (usize, Vec<usize>) {
    let mut scene = kind.scene(10, 1.0, jitter, seed).unwrap();
    if let Some(snr) = snr_db {
        scene.noise_sigma = scene.noise_sigma_at_snr(snr).unwrap();
    }
    let trace = synth_cycles(&scene).unwrap();
    let env = lowpass(&energy(&trace).unwrap(), &FilterSpec::default()).unwrap();
    let r = segment_motions(env.samples(), &SegmenterConfig::new(0.5, t_max, 100.0)).unwrap();
    (r.count(), r.segmentation.boundaries)
}

#[test]
fn noise_free_cycles_are_counted_with_exact_spacing() {
    // the phase of the first boundary is arbitrary; interior spacing is not
    for kind in MotionKind::ALL {
        let (count, bounds) = count_preset(kind, 1, 0.0, None, 1.5);
        assert_eq!(count, 10, "{kind}");
        for w in bounds[1..bounds.len() - 1].windows(2) {
            assert!(w[1].abs_diff(w[0] + 100) <= 2, "{kind}: {bounds:?}");
        }
    }
}

#[test]
#[ignore = "a window admitting two-cycle segments makes doubled partitions exactly optimal on noise-free input"]
fn noise_free_cycles_with_wide_window() {
    for kind in MotionKind::ALL {
        assert_eq!(count_preset(kind, 1, 0.0, None, 2.0).0, 10, "{kind}");
    }
}

#[test]
fn jittered_noisy_squat_counts_exactly() {
    assert_eq!(count_preset(MotionKind::Squat, 40, 0.2, Some(20.0), 1.5).0, 10);
}

#[test]
fn jittered_noisy_presets_mostly_count_exactly() {
    let mut exact = 0;
    let mut abs_err = 0.0;
    let mut n = 0;
    for kind in MotionKind::ALL {
        for seed in 40..60 {
            let (count, _) = count_preset(kind, seed, 0.2, Some(20.0), 1.5);
            exact += usize::from(count == 10);
            abs_err += (count as f64 - 10.0).abs() * 10.0;
            n += 1;
        }
    }
    assert!(exact as f64 >= 0.8 * n as f64, "{exact}/{n}");
    assert!(abs_err / n as f64 <= 5.0, "{}", abs_err / n as f64);
}

#[test]
fn fixed_duration_trace_has_requested_length() {
    let scene = MotionKind::Step.scene(5, 1.0, 0.0, 1).unwrap();
    let trace = synth_trace(&scene, 7.0).unwrap();
    assert_eq!(trace.len(), 700);
    assert_eq!(trace.ground_truth.unwrap().boundaries.len(), 5);
}

#[test]
fn generic_over_f32() {
    let scene = MotionKind::Dumbbell.scene::<f32>(6, 1.0, 0.0, 2).unwrap();
    let trace = synth_cycles(&scene).unwrap();
    let env = lowpass(&energy(&trace).unwrap(), &FilterSpec { cutoff_hz: 10.0f32, taps: 101 }).unwrap();
    let r = segment_motions(env.samples(), &SegmenterConfig::new(0.5f32, 2.0, 100.0)).unwrap();
    assert_eq!(r.count(), 6);
}

