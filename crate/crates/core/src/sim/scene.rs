//! Declarative scenes and baseband trace synthesis.

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::link::{scattered_power, CarrierConfig, LinkBudget};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seed::{rng_for, stream};

/// One cycle of displacement samples spanning `[0, period_s]` inclusive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplacementProfile<F> {
    /// Path length offsets (m), uniformly spaced over the cycle.
    pub samples: Vec<F>,
    /// Nominal cycle duration (s).
    pub period_s: F,
}

impl<F: Scalar> DisplacementProfile<F> {
    /// Samples `shape` at `n` points of the unit cycle.
    pub fn from_fn(n: usize, period_s: F, shape: impl Fn(F) -> F) -> Self {
        let denom = F::from_usize_lossy(n.max(2) - 1);
        Self {
            samples: (0..n.max(2)).map(|k| shape(F::from_usize_lossy(k) / denom)).collect(),
            period_s,
        }
    }

    /// Displacement at cycle phase `u ∈ [0, 1]`, linearly interpolated.
    pub fn at_phase(&self, u: F) -> F {
        let n = self.samples.len();
        if n == 1 {
            return self.samples[0];
        }
        let pos = u.max(F::zero()).min(F::one()) * F::from_usize_lossy(n - 1);
        let k = pos.floor().to_usize().unwrap_or(0).min(n - 2);
        let frac = pos - F::from_usize_lossy(k);
        self.samples[k] + (self.samples[k + 1] - self.samples[k]) * frac
    }

    fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::Scene("displacement profile has no samples".into()));
        }
        if !(self.period_s > F::zero()) {
            return Err(Error::Scene("nominal period must be positive".into()));
        }
        if self.samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Scene("displacement profile is not finite".into()));
        }
        Ok(())
    }
}

/// A point reflector moving along a periodic path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scatterer<F> {
    /// Complex reflection coefficient of this body segment.
    pub base_amplitude: Complex<F>,
    pub path_fn: DisplacementProfile<F>,
    /// Relative standard deviation of each cycle's duration.
    #[serde(default)]
    pub period_jitter: F,
}

fn one<F: num_traits::One>() -> F {
    F::one()
}

/// Everything needed to synthesize a labelled trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "F: Deserialize<'de> + num_traits::One + Default"))]
pub struct Scene<F> {
    pub link: LinkBudget<F>,
    pub carrier: CarrierConfig<F>,
    #[serde(default)]
    pub scatterers: Vec<Scatterer<F>>,
    /// Power arriving over paths untouched by motion (W).
    pub static_power: F,
    /// Standard deviation of the white noise on each of I and Q.
    #[serde(default)]
    pub noise_sigma: F,
    pub n_cycles: usize,
    #[serde(default)]
    pub rng_seed: u64,
    /// Receiver amplitude `A_0` of the unmodulated envelope.
    #[serde(default = "one")]
    pub envelope_scale: F,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motion_label: Option<String>,
}

/// Labels attached to a simulated trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub n_cycles: usize,
    /// Half-open `[start, end)` sample ranges of each complete cycle.
    pub boundaries: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Uniformly sampled complex baseband recording.
#[derive(Debug, Clone, PartialEq)]
pub struct IqTrace<F> {
    pub sample_rate: F,
    pub i_samples: Vec<F>,
    pub q_samples: Vec<F>,
    pub ground_truth: Option<GroundTruth>,
}

impl<F: Scalar> IqTrace<F> {
    pub fn new(sample_rate: F, i_samples: Vec<F>, q_samples: Vec<F>) -> Result<Self> {
        if i_samples.len() != q_samples.len() {
            return Err(Error::Data(format!(
                "I has {} samples but Q has {}",
                i_samples.len(),
                q_samples.len()
            )));
        }
        if i_samples.is_empty() {
            return Err(Error::Size { min: 1, got: 0 });
        }
        if !(sample_rate > F::zero()) {
            return Err(Error::Data("sample_rate must be positive".into()));
        }
        Ok(Self {
            sample_rate,
            i_samples,
            q_samples,
            ground_truth: None,
        })
    }

    pub fn len(&self) -> usize {
        self.i_samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i_samples.is_empty()
    }

    pub fn duration(&self) -> F {
        F::from_usize_lossy(self.len()) / self.sample_rate
    }
}

impl<F: Scalar> Scene<F> {
    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        self.carrier.validate()?;
        if !(self.static_power >= F::zero()) {
            return Err(Error::Scene("static_power must be non-negative".into()));
        }
        if !(self.noise_sigma >= F::zero()) {
            return Err(Error::Scene("noise_sigma must be non-negative".into()));
        }
        if !(self.envelope_scale > F::zero()) {
            return Err(Error::Scene("envelope_scale must be positive".into()));
        }
        for s in &self.scatterers {
            s.path_fn.validate()?;
            if !(s.period_jitter >= F::zero()) {
                return Err(Error::Scene("period_jitter must be non-negative".into()));
            }
        }
        Ok(())
    }

    /// Index of the scatterer whose cycles define the ground truth (shortest period).
    fn lead_scatterer(&self) -> Option<usize> {
        self.scatterers
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, F)>, (i, s)| match best {
                Some((_, p)) if p <= s.path_fn.period_s => best,
                _ => Some((i, s.path_fn.period_s)),
            })
            .map(|(i, _)| i)
    }

    /// Per-cycle standard normal draws shared by all scatterers, so body
    /// segments stay in step when their periods match.
    fn cycle_draws(&self) -> Vec<F> {
        let mut rng = rng_for(self.rng_seed, stream::JITTER);
        (0..self.n_cycles)
            .map(|_| F::lit(rng.sample::<f64, _>(StandardNormal)))
            .collect()
    }

    /// Cycle start times for each scatterer (length `n_cycles + 1`, last is the end).
    fn schedules(&self) -> Vec<Vec<F>> {
        let draws = self.cycle_draws();
        let floor = F::lit(0.1);
        self.scatterers
            .iter()
            .map(|s| {
                let mut t = F::zero();
                let mut starts = Vec::with_capacity(draws.len() + 1);
                starts.push(t);
                for &g in &draws {
                    let stretch = (F::one() + s.period_jitter * g).max(floor);
                    t = t + s.path_fn.period_s * stretch;
                    starts.push(t);
                }
                starts
            })
            .collect()
    }

    /// Total duration of the realized cycles of the lead scatterer.
    pub fn motion_duration(&self) -> F {
        match self.lead_scatterer() {
            Some(lead) => *self.schedules()[lead].last().unwrap(),
            None => F::zero(),
        }
    }

    /// Noise-free received envelope `A(t)·A_0` at each sample of a trace of `n` samples.
    pub fn clean_envelope(&self, n: usize) -> Result<Vec<F>> {
        Ok(self.clean_baseband(n)?.into_iter().map(|z| z.norm()).collect())
    }

    /// Noise sigma that puts the realized motion at `snr_db` (see [`noise_sigma_for_snr`]).
    pub fn noise_sigma_at_snr(&self, snr_db: F) -> Result<F> {
        let n = (self.motion_duration() * self.carrier.sample_rate)
            .ceil()
            .to_usize()
            .unwrap_or(0)
            .max(2);
        let env = self.clean_envelope(n)?;
        let nf = F::from_usize_lossy(n);
        let mu = env.iter().fold(F::zero(), |a, &b| a + b) / nf;
        let var = env.iter().fold(F::zero(), |a, &b| a + (b - mu) * (b - mu)) / nf;
        Ok(noise_sigma_for_snr(var, snr_db))
    }

    fn clean_baseband(&self, n: usize) -> Result<Vec<Complex<F>>> {
        self.validate()?;
        let schedules = self.schedules();
        let fs = self.carrier.sample_rate;
        let lambda = self.link.lambda;
        let two_pi = F::lit(2.0) * F::PI();
        let tag_amp = if self.scatterers.is_empty() {
            F::zero()
        } else {
            scattered_power(&self.link)?.sqrt()
        };
        let static_amp = self.static_power.sqrt();
        let reference = if static_amp > F::zero() { static_amp } else { F::one() };
        let gain = self.envelope_scale / reference;

        Ok((0..n)
            .map(|k| {
                let t = F::from_usize_lossy(k) / fs;
                let dynamic = self
                    .scatterers
                    .iter()
                    .zip(&schedules)
                    .fold(Complex::new(F::zero(), F::zero()), |acc, (s, starts)| {
                        let d = displacement_at(s, starts, t);
                        acc + s.base_amplitude * Complex::from_polar(tag_amp, -two_pi * d / lambda)
                    });
                (Complex::new(static_amp, F::zero()) + dynamic) * gain
            })
            .collect())
    }

    fn ground_truth(&self, n: usize) -> GroundTruth {
        let fs = self.carrier.sample_rate;
        let boundaries = match self.lead_scatterer() {
            None => Vec::new(),
            Some(lead) => {
                let starts = &self.schedules()[lead];
                let idx = |t: F| (t * fs).round().to_usize().unwrap_or(0);
                starts
                    .windows(2)
                    .map(|w| (idx(w[0]), idx(w[1]).min(n)))
                    .filter(|&(a, b)| b > a)
                    .collect()
            }
        };
        GroundTruth {
            n_cycles: boundaries.len(),
            boundaries,
            label: self.motion_label.clone(),
        }
    }
}

fn displacement_at<F: Scalar>(s: &Scatterer<F>, starts: &[F], t: F) -> F {
    let last = *starts.last().unwrap();
    if starts.len() < 2 || t >= last {
        return *s.path_fn.samples.last().unwrap();
    }
    let k = starts.partition_point(|&b| b <= t).saturating_sub(1);
    let u = (t - starts[k]) / (starts[k + 1] - starts[k]);
    s.path_fn.at_phase(u)
}

/// Synthesize `duration` seconds of baseband I/Q for `scene`.
///
/// Cycles that do not finish within `duration` are left out of the ground truth.
pub fn synth_trace<F: Scalar>(scene: &Scene<F>, duration: F) -> Result<IqTrace<F>> {
    scene.validate()?;
    let shortest = scene
        .scatterers
        .iter()
        .map(|s| s.path_fn.period_s)
        .fold(F::infinity(), F::min);
    if scene.n_cycles > 0 && !scene.scatterers.is_empty() {
        let needed = F::from_usize_lossy(scene.n_cycles) * shortest;
        if duration < needed {
            return Err(Error::Scene(format!(
                "duration {duration} s is shorter than {} cycles of {shortest} s",
                scene.n_cycles
            )));
        }
    }
    synth_samples(scene, duration)
}

fn synth_samples<F: Scalar>(scene: &Scene<F>, duration: F) -> Result<IqTrace<F>> {
    let n = (duration * scene.carrier.sample_rate).round().to_usize().unwrap_or(0);
    if n == 0 {
        return Err(Error::Scene("duration yields no samples".into()));
    }
    let clean = scene.clean_baseband(n)?;
    let (mut i_samples, mut q_samples): (Vec<F>, Vec<F>) = clean.iter().map(|z| (z.re, z.im)).unzip();
    if scene.noise_sigma > F::zero() {
        let mut rng = rng_for(scene.rng_seed, stream::NOISE);
        for (i, q) in i_samples.iter_mut().zip(q_samples.iter_mut()) {
            *i = *i + scene.noise_sigma * F::lit(rng.sample::<f64, _>(StandardNormal));
            *q = *q + scene.noise_sigma * F::lit(rng.sample::<f64, _>(StandardNormal));
        }
    }
    let mut trace = IqTrace::new(scene.carrier.sample_rate, i_samples, q_samples)?;
    trace.ground_truth = Some(scene.ground_truth(n));
    Ok(trace)
}

/// Synthesize exactly the realized motion: the trace ends with the last cycle.
pub fn synth_cycles<F: Scalar>(scene: &Scene<F>) -> Result<IqTrace<F>> {
    scene.validate()?;
    if scene.n_cycles == 0 || scene.scatterers.is_empty() {
        return Err(Error::Scene("scene has no motion to synthesize".into()));
    }
    synth_samples(scene, scene.motion_duration())
}

/// Noise sigma giving `snr_db` for an envelope whose motion component has
/// variance `motion_variance`. SNR is motion-envelope variance over per-component noise variance.
pub fn noise_sigma_for_snr<F: Scalar>(motion_variance: F, snr_db: F) -> F {
    (motion_variance / F::lit(10.0).powf(snr_db / F::lit(10.0))).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_scene() -> Scene<f64> {
        let link = LinkBudget::default();
        let p_tag = scattered_power(&link).unwrap();
        Scene {
            link,
            carrier: CarrierConfig::default(),
            scatterers: vec![],
            static_power: p_tag,
            noise_sigma: 0.0,
            n_cycles: 0,
            rng_seed: 1,
            envelope_scale: 2.5,
            motion_label: None,
        }
    }

    fn sine_scatterer(period: f64, amp: f64) -> Scatterer<f64> {
        Scatterer {
            base_amplitude: Complex::new(0.4, 0.0),
            path_fn: DisplacementProfile::from_fn(401, period, |u: f64| {
                amp * (2.0 * std::f64::consts::PI * u).sin()
            }),
            period_jitter: 0.0,
        }
    }

    fn envelope(tr: &IqTrace<f64>) -> Vec<f64> {
        tr.i_samples.iter().zip(&tr.q_samples).map(|(i, q)| i.hypot(*q)).collect()
    }

    #[test]
    fn empty_scene_is_flat_at_a0() {
        let tr = synth_trace(&base_scene(), 3.0).unwrap();
        assert_eq!(tr.len(), 300);
        for e in envelope(&tr) {
            assert!((e - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn stationary_scatterer_is_flat() {
        let mut sc = base_scene();
        sc.scatterers.push(Scatterer {
            base_amplitude: Complex::new(0.3, 0.1),
            path_fn: DisplacementProfile { samples: vec![0.42; 5], period_s: 1.0 },
            period_jitter: 0.0,
        });
        sc.n_cycles = 3;
        let env = envelope(&synth_trace(&sc, 4.0).unwrap());
        for e in &env {
            assert!((e - env[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn sinusoidal_motion_autocorrelation_peaks_at_period() {
        let mut sc = base_scene();
        // a real coefficient would make the envelope even in d(t), halving its period
        let mut s = sine_scatterer(1.0, 0.05);
        s.base_amplitude = Complex::new(0.3, 0.3);
        sc.scatterers.push(s);
        sc.n_cycles = 10;
        let env = envelope(&synth_trace(&sc, 10.0).unwrap());
        let m = env.iter().sum::<f64>() / env.len() as f64;
        let c: Vec<f64> = env.iter().map(|v| v - m).collect();
        // search lags 0.5 s .. 1.5 s
        let best = (50..150)
            .max_by(|&a, &b| {
                let ra: f64 = (0..c.len() - a).map(|k| c[k] * c[k + a]).sum::<f64>() / (c.len() - a) as f64;
                let rb: f64 = (0..c.len() - b).map(|k| c[k] * c[k + b]).sum::<f64>() / (c.len() - b) as f64;
                ra.partial_cmp(&rb).unwrap()
            })
            .unwrap();
        assert_eq!(best, 100);
    }

    #[test]
    fn ground_truth_boundaries_without_jitter() {
        let mut sc = base_scene();
        sc.scatterers.push(sine_scatterer(1.0, 0.05));
        sc.n_cycles = 10;
        let tr = synth_cycles(&sc).unwrap();
        assert_eq!(tr.len(), 1000);
        let gt = tr.ground_truth.unwrap();
        assert_eq!(gt.n_cycles, 10);
        for (k, &(a, b)) in gt.boundaries.iter().enumerate() {
            assert_eq!((a, b), (100 * k, 100 * (k + 1)));
        }
    }

    #[test]
    fn jitter_stretches_cycles_and_is_reproducible() {
        let mut sc = base_scene();
        let mut s = sine_scatterer(1.0, 0.05);
        s.period_jitter = 0.2;
        sc.scatterers.push(s);
        sc.n_cycles = 20;
        sc.noise_sigma = 0.01;
        let a = synth_cycles(&sc).unwrap();
        let b = synth_cycles(&sc).unwrap();
        assert_eq!(a, b);
        let gt = a.ground_truth.unwrap();
        assert_eq!(gt.n_cycles, 20);
        let lens: Vec<usize> = gt.boundaries.iter().map(|(s, e)| e - s).collect();
        assert!(lens.iter().any(|&l| l != lens[0]));
        assert!(gt.boundaries.windows(2).all(|w| w[0].1 == w[1].0));
        assert_eq!(gt.boundaries.last().unwrap().1, a.i_samples.len());
    }

    #[test]
    fn too_short_duration_rejected() {
        let mut sc = base_scene();
        sc.scatterers.push(sine_scatterer(1.0, 0.05));
        sc.n_cycles = 10;
        assert!(matches!(synth_trace(&sc, 9.0), Err(Error::Scene(_))));
    }

    #[test]
    fn identical_scatterers_bound_dynamic_magnitude() {
        let mut sc = base_scene();
        sc.static_power = 0.0;
        sc.envelope_scale = 1.0;
        let k = 3;
        for _ in 0..k {
            sc.scatterers.push(sine_scatterer(1.0, 0.07));
        }
        sc.n_cycles = 2;
        let p_tag = scattered_power(&sc.link).unwrap().sqrt();
        let env = envelope(&synth_trace(&sc, 2.0).unwrap());
        let bound = k as f64 * 0.4 * p_tag;
        let peak = env.iter().cloned().fold(0.0, f64::max);
        assert!((peak - bound).abs() < 1e-12 * bound.max(1.0));

        // differing displacements stay under the bound
        sc.scatterers[1].path_fn = DisplacementProfile::from_fn(101, 1.0, |u: f64| 0.03 * u * (1.0 - u));
        let env = envelope(&synth_trace(&sc, 2.0).unwrap());
        assert!(env.iter().all(|&e| e <= bound * (1.0 + 1e-12)));
    }

    #[test]
    fn symmetric_path_gives_symmetric_cycle() {
        let mut sc = base_scene();
        sc.scatterers.push(Scatterer {
            base_amplitude: Complex::new(0.5, 0.2),
            path_fn: DisplacementProfile::from_fn(201, 1.0, |u: f64| 0.2 * (std::f64::consts::PI * u).sin()),
            period_jitter: 0.0,
        });
        sc.n_cycles = 1;
        let env = sc.clean_envelope(101).unwrap();
        for k in 0..=50 {
            assert!((env[k] - env[100 - k]).abs() < 1e-3, "k={k}");
        }
    }

    #[test]
    fn scene_json_roundtrip() {
        let mut sc = base_scene();
        sc.scatterers.push(sine_scatterer(1.0, 0.05));
        let json = serde_json::to_string(&sc).unwrap();
        assert!(json.contains("\"path_fn\"") && json.contains("\"static_power\""));
        let back: Scene<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sc);
    }
}
