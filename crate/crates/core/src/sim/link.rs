//! Tag link budget: reflection coefficients, differential RCS and scattered power.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Transmitter/tag geometry and impedances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget<F> {
    /// Transmit power (W).
    pub p_tx: F,
    pub g_tx: F,
    pub g_tag: F,
    /// Carrier wavelength (m).
    pub lambda: F,
    /// Transmitter-to-tag distance (m).
    pub d: F,
    pub z_a: Complex<F>,
    /// Tag circuit impedance in the first switch state.
    pub z_c1: Complex<F>,
    /// Tag circuit impedance in the second switch state.
    pub z_c2: Complex<F>,
}

impl<F: Scalar> LinkBudget<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.p_tx > F::zero()) {
            return Err(Error::Geometry("p_tx must be positive".into()));
        }
        if !(self.d > F::zero()) {
            return Err(Error::Geometry("tag distance d must be positive".into()));
        }
        if !(self.lambda > F::zero()) {
            return Err(Error::Geometry("wavelength must be positive".into()));
        }
        for (name, z) in [("z_a", self.z_a), ("z_c1", self.z_c1), ("z_c2", self.z_c2)] {
            if z.re < F::zero() {
                return Err(Error::Geometry(format!("{name} has negative resistance")));
            }
        }
        Ok(())
    }

    /// Differential RCS between the two switch states.
    pub fn delta_rcs(&self) -> Result<F> {
        let g1 = reflection_coefficient(self.z_a, self.z_c1)?;
        let g2 = reflection_coefficient(self.z_a, self.z_c2)?;
        differential_rcs(self.lambda, self.g_tag, g1, g2)
    }
}

impl Default for LinkBudget<f64> {
    /// 2 GHz carrier, 10 dBm, unity gains, 1 m, 50 Ω antenna switched between
    /// a short and a matched load.
    fn default() -> Self {
        Self {
            p_tx: 0.01,
            g_tx: 1.0,
            g_tag: 1.0,
            lambda: 299_792_458.0 / 2.0e9,
            d: 1.0,
            z_a: Complex::new(50.0, 0.0),
            z_c1: Complex::new(0.0, 0.0),
            z_c2: Complex::new(50.0, 0.0),
        }
    }
}

/// Conjugate reflection coefficient `(Z_a* - Z_c) / (Z_a + Z_c)`.
pub fn reflection_coefficient<F: Scalar>(z_a: Complex<F>, z_c: Complex<F>) -> Result<Complex<F>> {
    let den = z_a + z_c;
    if den.re == F::zero() && den.im == F::zero() {
        return Err(Error::DegenerateImpedance);
    }
    Ok((z_a.conj() - z_c) / den)
}

/// Differential radar cross-section `(λ²/4π) G_tag² |Γ1* - Γ2*|` in m².
pub fn differential_rcs<F: Scalar>(
    lambda: F,
    g_tag: F,
    gamma1: Complex<F>,
    gamma2: Complex<F>,
) -> Result<F> {
    if !(lambda > F::zero()) {
        return Err(Error::Geometry("wavelength must be positive".into()));
    }
    let four_pi = F::lit(4.0) * F::PI();
    Ok(lambda * lambda / four_pi * g_tag * g_tag * (gamma1 - gamma2).norm())
}

/// Power scattered by the tag, `P_tx G_tx ΔΓ / (4π d²)`, in W.
pub fn scattered_power<F: Scalar>(link: &LinkBudget<F>) -> Result<F> {
    link.validate()?;
    scattered_power_from_rcs(link.p_tx, link.g_tx, link.delta_rcs()?, link.d)
}

/// Scattered power for an already-known differential RCS.
pub fn scattered_power_from_rcs<F: Scalar>(p_tx: F, g_tx: F, delta_rcs: F, d: F) -> Result<F> {
    if !(d > F::zero()) {
        return Err(Error::Geometry("tag distance d must be positive".into()));
    }
    Ok(p_tx * g_tx * delta_rcs / (F::lit(4.0) * F::PI() * d * d))
}

/// Carrier and baseband sampling parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierConfig<F> {
    /// Carrier frequency (Hz).
    pub f_c: F,
    /// Tag switching frequency (Hz).
    pub delta_f: F,
    /// Baseband samples per second.
    pub sample_rate: F,
}

impl<F: Scalar> CarrierConfig<F> {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_f > F::zero() && self.delta_f < self.f_c) {
            return Err(Error::Scene("carrier requires 0 < delta_f < f_c".into()));
        }
        if !(self.sample_rate > F::zero()) {
            return Err(Error::Scene("sample_rate must be positive".into()));
        }
        Ok(())
    }

    /// The two sideband frequencies produced by tag switching.
    pub fn sidebands(&self) -> (F, F) {
        (self.f_c - self.delta_f, self.f_c + self.delta_f)
    }
}

impl Default for CarrierConfig<f64> {
    fn default() -> Self {
        Self {
            f_c: 2.0e9,
            delta_f: 1.0e6,
            sample_rate: 100.0,
        }
    }
}

/// One odd harmonic of the tag's square switching waveform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Harmonic<F> {
    pub order: usize,
    pub frequency: F,
    pub amplitude: F,
}

impl<F: Scalar> Harmonic<F> {
    /// Power relative to the fundamental, in dB.
    pub fn relative_db(&self) -> F {
        F::lit(20.0) * (F::one() / F::from_usize_lossy(self.order)).log10()
    }

    /// Mean power of this sinusoidal component.
    pub fn power(&self) -> F {
        self.amplitude * self.amplitude / F::lit(2.0)
    }
}

/// The first `n` odd harmonics of a unit square wave at `delta_f`:
/// amplitude `(4/π)/k` at frequency `k·delta_f`, `k = 1, 3, 5, ...`.
pub fn square_wave_harmonics<F: Scalar>(delta_f: F, n: usize) -> Result<Vec<Harmonic<F>>> {
    if n == 0 {
        return Err(Error::Domain("need at least one harmonic".into()));
    }
    let four_over_pi = F::lit(4.0) / F::PI();
    Ok((0..n)
        .map(|i| {
            let order = 2 * i + 1;
            let k = F::from_usize_lossy(order);
            Harmonic {
                order,
                frequency: k * delta_f,
                amplitude: four_over_pi / k,
            }
        })
        .collect())
}
