//! Backscatter channel and scene simulation.

mod link;
mod motions;
mod scene;

pub use link::{
    differential_rcs, reflection_coefficient, scattered_power, scattered_power_from_rcs,
    square_wave_harmonics, CarrierConfig, Harmonic, LinkBudget,
};
pub use motions::MotionKind;
pub use scene::{
    noise_sigma_for_snr, synth_cycles, synth_trace, DisplacementProfile, GroundTruth, IqTrace,
    Scatterer, Scene,
};
