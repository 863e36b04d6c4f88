//! Stock displacement patterns for seven exercise motions.
//!
//! Each motion is a small set of body-segment scatterers with closed
//! one-cycle paths (start and end at rest). They are stand-ins for real
//! recordings: tens of centimetres of path change at a 15 cm wavelength,
//! giving several envelope ripples per repetition. Path swings avoid whole
//! multiples of the wavelength, which would make the turnaround look like
//! rest and give the envelope a sub-cycle period.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::link::{scattered_power, CarrierConfig, LinkBudget};
use super::scene::{DisplacementProfile, Scatterer, Scene};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

const PROFILE_POINTS: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MotionKind {
    Squat,
    PushUp,
    SitUp,
    LegRaise,
    Step,
    StoopDown,
    Dumbbell,
}

/// Reflection coefficient, path scale in metres and unit-cycle shape of one body segment.
type BodySegment = (Complex<f64>, f64, fn(f64) -> f64);

impl MotionKind {
    pub const ALL: [MotionKind; 7] = [
        MotionKind::Squat,
        MotionKind::PushUp,
        MotionKind::SitUp,
        MotionKind::LegRaise,
        MotionKind::Step,
        MotionKind::StoopDown,
        MotionKind::Dumbbell,
    ];

    pub fn code(self) -> &'static str {
        match self {
            MotionKind::Squat => "SQ",
            MotionKind::PushUp => "PU",
            MotionKind::SitUp => "SU",
            MotionKind::LegRaise => "LR",
            MotionKind::Step => "ST",
            MotionKind::StoopDown => "SD",
            MotionKind::Dumbbell => "DB",
        }
    }

    fn segments(self) -> Vec<BodySegment> {
        match self {
            MotionKind::Squat => vec![
                (Complex::new(0.40, 0.20), 0.27, raised),
                (Complex::new(0.15, 0.10), 0.16, |u| raised(u).powi(2)),
            ],
            MotionKind::PushUp => vec![(Complex::new(0.45, 0.20), 0.23, |u| skewed(u, 0.35))],
            MotionKind::SitUp => vec![(Complex::new(0.45, -0.20), 0.37, |u| plateau(u, 0.3, 0.2))],
            MotionKind::LegRaise => vec![
                (Complex::new(0.35, 0.20), 0.52, |u| skewed(u, 0.6)),
                (Complex::new(0.15, 0.05), 0.05, raised),
            ],
            MotionKind::Step => vec![(Complex::new(0.40, 0.15), 0.19, double_bump)],
            MotionKind::StoopDown => vec![(Complex::new(0.45, 0.20), 0.41, |u| plateau(u, 0.25, 0.35))],
            MotionKind::Dumbbell => vec![(Complex::new(0.30, 0.15), 0.11, raised)],
        }
    }

    /// Body-segment scatterers for one repetition lasting `period_s` nominally.
    pub fn scatterers<F: Scalar>(self, period_s: F, jitter: F) -> Vec<Scatterer<F>> {
        self.segments()
            .into_iter()
            .map(|(a, scale, shape)| Scatterer {
                base_amplitude: Complex::new(F::lit(a.re), F::lit(a.im)),
                path_fn: DisplacementProfile::from_fn(PROFILE_POINTS, period_s, |u: F| {
                    F::lit(scale * shape(u.to_f64_lossy()))
                }),
                period_jitter: jitter,
            })
            .collect()
    }

    /// Scene with the default link and the tag's own direct path as the static component.
    pub fn scene<F: Scalar>(self, n_cycles: usize, period_s: F, jitter: F, seed: u64) -> Result<Scene<F>> {
        let link = LinkBudget::<f64>::default();
        let carrier = CarrierConfig::<f64>::default();
        let p_tag = scattered_power(&link)?;
        let cast = |v: Complex<f64>| Complex::new(F::lit(v.re), F::lit(v.im));
        Ok(Scene {
            link: LinkBudget {
                p_tx: F::lit(link.p_tx),
                g_tx: F::lit(link.g_tx),
                g_tag: F::lit(link.g_tag),
                lambda: F::lit(link.lambda),
                d: F::lit(link.d),
                z_a: cast(link.z_a),
                z_c1: cast(link.z_c1),
                z_c2: cast(link.z_c2),
            },
            carrier: CarrierConfig {
                f_c: F::lit(carrier.f_c),
                delta_f: F::lit(carrier.delta_f),
                sample_rate: F::lit(carrier.sample_rate),
            },
            scatterers: self.scatterers(period_s, jitter),
            static_power: F::lit(p_tag),
            noise_sigma: F::zero(),
            n_cycles,
            rng_seed: seed,
            envelope_scale: F::one(),
            motion_label: Some(self.code().to_string()),
        })
    }
}

impl fmt::Display for MotionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MotionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MotionKind::ALL
            .into_iter()
            .find(|m| m.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Data(format!("unknown motion code {s:?}")))
    }
}

fn raised(u: f64) -> f64 {
    0.5 * (1.0 - (2.0 * PI * u).cos())
}

/// Smooth excursion peaking at `peak`.
fn skewed(u: f64, peak: f64) -> f64 {
    if u <= peak {
        0.5 * (1.0 - (PI * u / peak).cos())
    } else {
        0.5 * (1.0 + (PI * (u - peak) / (1.0 - peak)).cos())
    }
}

/// Rise over `rise`, hold for `hold`, then descend over the remainder.
fn plateau(u: f64, rise: f64, hold: f64) -> f64 {
    if u <= rise {
        0.5 * (1.0 - (PI * u / rise).cos())
    } else if u <= rise + hold {
        1.0
    } else {
        let fall = 1.0 - rise - hold;
        0.5 * (1.0 + (PI * (u - rise - hold) / fall).cos())
    }
}

fn double_bump(u: f64) -> f64 {
    if u < 0.5 {
        raised(2.0 * u)
    } else {
        0.6 * raised(2.0 * u - 1.0)
    }
}
