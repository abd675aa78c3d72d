//! Continuous Faraday measurement of `F_z`: measurement strength, simulated
//! photocurrents, the recursive least-squares filter and the squeezing it
//! implies.
//!
//! `ħ` is kept symbolic: spin quantities are in units of `ħ` and variances
//! in `ħ²`, so `S` is reported in W² and `M` in s⁻¹ (per `ħ²`).

mod filter;
mod photocurrent;
mod probe;
mod squeezing;

pub use filter::{closed_form_variance, ensemble_mse, filter_estimate, EnsembleSummary, FilterState};
pub use photocurrent::{simulate_photocurrent, NoiseMode, PhotocurrentRecord, PhotocurrentSimulation};
pub use probe::{
    measurement_strength, scattering_rate, scattering_strength, shot_noise, MeasurementParams, ProbeParams,
    MEASUREMENT_TOLERANCE,
};
pub use squeezing::{
    coherent_prior_variance, snr_squared_from_od, snr_squeezing, squeezing_parameter, Squeezing, SNR_TOLERANCE,
    VALIDITY_FRACTION,
};
