use std::f64::consts::{FRAC_PI_2, TAU};

use super::measurement_strength;
use super::ProbeParams;
use crate::angular::SpinOrientation;
use crate::atomdata::AtomSpecies;
use crate::semiclassical::CloudParams;
use crate::{Error, Result};

/// Relative disagreement between the two routes to `SNR²` treated as a bug.
pub const SNR_TOLERANCE: f64 = 1e-9;

/// Fraction of `τ_s` beyond which probe-induced decoherence is no longer
/// negligible and results are flagged.
pub const VALIDITY_FRACTION: f64 = 0.1;

const ORIENTATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Squeezing {
    pub tau: f64,
    pub snr2: f64,
    /// `W = 1/(1 + SNR²)`.
    pub w: f64,
    pub tau_over_tau_s: f64,
    /// Set when `τ > 0.1 τ_s`.
    pub beyond_validity: bool,
}

/// `⟨ΔF_z²⟩₀ = N f / 2` (units of ħ²) for a coherent spin state along x.
pub fn coherent_prior_variance(n_atoms: f64, f: f64) -> f64 {
    n_atoms * f / 2.0
}

/// `SNR² = η · OD · (f/4) · (τ/τ_s)`.
pub fn snr_squared_from_od(efficiency: f64, od: f64, f: f64, tau_over_tau_s: f64) -> f64 {
    efficiency * od * (f / 4.0) * tau_over_tau_s
}

pub fn squeezing_parameter(snr2: f64) -> f64 {
    1.0 / (1.0 + snr2)
}

/// Measurement-induced squeezing after probing for `tau` seconds.
///
/// Only defined for spins along x (θ = π/2, φ = 0), where the probe sees a
/// pure Faraday rotation. `SNR² = η⟨ΔF_z²⟩₀Mτ` is cross-checked against
/// [`snr_squared_from_od`].
pub fn snr_squeezing(
    species: &AtomSpecies,
    cloud: &CloudParams,
    probe: &ProbeParams,
    orient: SpinOrientation,
    tau: f64,
) -> Result<Squeezing> {
    let phi = orient.phi();
    let along_x = (orient.theta() - FRAC_PI_2).abs() <= ORIENTATION_TOLERANCE
        && (phi <= ORIENTATION_TOLERANCE || TAU - phi <= ORIENTATION_TOLERANCE);
    if !along_x {
        return Err(Error::Geometry(format!(
            "squeezing needs the spin along x (θ = π/2, φ = 0), got θ = {}, φ = {}; \
             other orientations add tensor rotation and the Faraday model does not apply",
            orient.theta(),
            phi
        )));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::domain(format!("probe time must be non-negative, got {tau}")));
    }
    let m = measurement_strength(species, cloud, probe)?;
    let f = species.ground_f.value();
    let eta = probe.efficiency();
    let v0 = coherent_prior_variance(cloud.n_atoms(), f);
    let snr2 = eta * v0 * m.meas_strength * tau;
    let tau_over_tau_s = tau * m.scat_rate;
    let via_od = snr_squared_from_od(eta, cloud.od(), f, tau_over_tau_s);
    let scale = snr2.abs().max(via_od.abs());
    if (snr2 - via_od).abs() > SNR_TOLERANCE * scale {
        return Err(Error::Consistency(format!("SNR² routes disagree: {snr2:e} vs {via_od:e}")));
    }
    Ok(Squeezing {
        tau,
        snr2,
        w: squeezing_parameter(snr2),
        tau_over_tau_s,
        beyond_validity: tau_over_tau_s > VALIDITY_FRACTION,
    })
}
