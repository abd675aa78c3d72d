use crate::atomdata::AtomSpecies;
use crate::constants::{PLANCK, SPEED_OF_LIGHT};
use crate::semiclassical::{line_sums, CloudParams};
use crate::{Error, Result};

/// Relative disagreement between the two routes to `M` treated as a bug.
pub const MEASUREMENT_TOLERANCE: f64 = 1e-9;

/// Probe beam settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeParams {
    power: f64,
    photon_energy: f64,
    detuning: f64,
    efficiency: f64,
    pol_angle: f64,
    gain: f64,
}

impl ProbeParams {
    /// `power` in W, `wavelength` in m, `detuning` in rad/s from the
    /// reference line (positive is blue), `pol_angle` in rad.
    pub fn new(power: f64, wavelength: f64, detuning: f64, efficiency: f64, pol_angle: f64) -> Result<Self> {
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::validation(format!("probe power must be non-negative, got {power}")));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::validation(format!("wavelength must be positive, got {wavelength}")));
        }
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(Error::validation(format!("detection efficiency must lie in [0, 1], got {efficiency}")));
        }
        if !detuning.is_finite() || !pol_angle.is_finite() {
            return Err(Error::validation("detuning and polarization angle must be finite"));
        }
        Ok(ProbeParams {
            power,
            photon_energy: PLANCK * SPEED_OF_LIGHT / wavelength,
            detuning,
            efficiency,
            pol_angle,
            gain: 1.0,
        })
    }

    /// Polarimeter gain applied to the recorded photocurrent.
    pub fn with_gain(self, gain: f64) -> Result<Self> {
        if !(gain.is_finite() && gain != 0.0) {
            return Err(Error::validation(format!("gain must be finite and nonzero, got {gain}")));
        }
        Ok(ProbeParams { gain, ..self })
    }

    pub fn with_detuning(&self, detuning: f64) -> Result<Self> {
        if !detuning.is_finite() {
            return Err(Error::validation("detuning must be finite"));
        }
        Ok(ProbeParams { detuning, ..*self })
    }

    pub fn with_efficiency(&self, efficiency: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&efficiency) {
            return Err(Error::validation(format!("detection efficiency must lie in [0, 1], got {efficiency}")));
        }
        Ok(ProbeParams { efficiency, ..*self })
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// `ħω = hc/λ₀` in J.
    pub fn photon_energy(&self) -> f64 {
        self.photon_energy
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn efficiency(&self) -> f64 {
        self.efficiency
    }

    pub fn pol_angle(&self) -> f64 {
        self.pol_angle
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Intensity over the cloud cross-section, W/m².
    pub fn intensity(&self, cloud: &CloudParams) -> f64 {
        self.power / cloud.area()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementParams {
    /// `S` in W² (times `1/ħ²`).
    pub scattering_strength: f64,
    /// `Δζ²` in W²/Hz.
    pub shot_noise: f64,
    /// `M` in s⁻¹ (times `1/ħ²`).
    pub meas_strength: f64,
    /// `τ_s⁻¹` in s⁻¹.
    pub scat_rate: f64,
}

fn rotation_rate_factor(species: &AtomSpecies, probe: &ProbeParams) -> Result<f64> {
    Ok(species.linewidth / 4.0 * line_sums(species, probe.detuning())?.vector)
}

/// `S = [I σ₀ (Γ/4) Σ α^(1)/(α₀Δ)]²`.
pub fn scattering_strength(species: &AtomSpecies, cloud: &CloudParams, probe: &ProbeParams) -> Result<f64> {
    let amplitude = probe.intensity(cloud) * cloud.sigma0() * rotation_rate_factor(species, probe)?;
    Ok(amplitude * amplitude)
}

/// `Δζ² = 2ħωP`.
pub fn shot_noise(probe: &ProbeParams) -> f64 {
    2.0 * probe.photon_energy() * probe.power()
}

/// `τ_s⁻¹ = (I σ₀/ħω) ((Γ/4) Σ α^(1)/(α₀Δ))²`.
pub fn scattering_rate(species: &AtomSpecies, probe: &ProbeParams, cloud: &CloudParams) -> Result<f64> {
    let k = rotation_rate_factor(species, probe)?;
    Ok(probe.intensity(cloud) * cloud.sigma0() / probe.photon_energy() * k * k)
}

/// `M = S/Δζ²`, checked against `τ_s⁻¹ σ₀ / 2A`.
pub fn measurement_strength(
    species: &AtomSpecies,
    cloud: &CloudParams,
    probe: &ProbeParams,
) -> Result<MeasurementParams> {
    let s = scattering_strength(species, cloud, probe)?;
    let noise = shot_noise(probe);
    let rate = scattering_rate(species, probe, cloud)?;
    let via_rate = 0.5 * rate * cloud.sigma0() / cloud.area();
    let via_ratio = if noise > 0.0 { s / noise } else { via_rate };
    let scale = via_ratio.abs().max(via_rate.abs());
    if (via_ratio - via_rate).abs() > MEASUREMENT_TOLERANCE * scale {
        return Err(Error::Consistency(format!(
            "measurement strength routes disagree: S/Δζ² = {via_ratio:e}, τ_s⁻¹σ₀/2A = {via_rate:e}"
        )));
    }
    Ok(MeasurementParams { scattering_strength: s, shot_noise: noise, meas_strength: via_ratio, scat_rate: rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomdata::cesium_d2;
    use std::f64::consts::TAU;

    fn setup(power: f64, detuning_hz: f64) -> (AtomSpecies, CloudParams, ProbeParams) {
        let cs = cesium_d2();
        let cloud = CloudParams::new(1e9, 4e-3, None, cs.wavelength).unwrap();
        let probe = ProbeParams::new(power, cs.wavelength, TAU * detuning_hz, 1.0, 0.0).unwrap();
        (cs, cloud, probe)
    }

    #[test]
    fn shot_noise_reference() {
        let probe = ProbeParams::new(10e-6, 852e-9, 0.0, 1.0, 0.0).unwrap();
        assert!((probe.photon_energy() - 2.3315e-19).abs() < 1e-22);
        assert!((shot_noise(&probe) - 4.663e-24).abs() < 1e-26);
    }

    #[test]
    fn zero_power() {
        let (cs, cloud, probe) = setup(0.0, 1e9);
        let m = measurement_strength(&cs, &cloud, &probe).unwrap();
        assert_eq!((m.scattering_strength, m.shot_noise, m.meas_strength, m.scat_rate), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn routes_agree() {
        let (cs, cloud, probe) = setup(10e-6, 1e9);
        let m = measurement_strength(&cs, &cloud, &probe).unwrap();
        let other = 0.5 * m.scat_rate * cloud.sigma0() / cloud.area();
        assert!((m.meas_strength - other).abs() <= 1e-12 * other);
        assert!(m.meas_strength > 0.0);
    }

    #[test]
    fn efficiency_range() {
        assert!(ProbeParams::new(1e-5, 852e-9, 1e9, 1.2, 0.0).is_err());
        assert!(ProbeParams::new(1e-5, 852e-9, 1e9, -0.1, 0.0).is_err());
        assert!(ProbeParams::new(-1e-5, 852e-9, 1e9, 1.0, 0.0).is_err());
    }
}
