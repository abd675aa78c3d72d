use std::f64::consts::PI;

use crate::atomdata::AtomSpecies;
use crate::constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::polarizability::alpha_zero;
use crate::{Error, Result};

/// Relative agreement required between the two routes to γ₀.
pub const GAMMA0_TOLERANCE: f64 = 1e-12;

/// Cylindrical atom cloud seen by the probe beam.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CloudParams {
    n_atoms: f64,
    radius: f64,
    length: f64,
    sigma0: f64,
}

impl CloudParams {
    /// `length` defaults to the diameter `2r`.
    pub fn new(n_atoms: f64, radius: f64, length: Option<f64>, wavelength: f64) -> Result<Self> {
        let length = length.unwrap_or(2.0 * radius);
        for (name, v) in [("atom number", n_atoms), ("radius", radius), ("length", length), ("wavelength", wavelength)]
        {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(CloudParams { n_atoms, radius, length, sigma0: 3.0 * wavelength * wavelength / (2.0 * PI) })
    }

    pub fn n_atoms(&self) -> f64 {
        self.n_atoms
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Resonant cross section `3λ₀²/2π`.
    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }

    pub fn volume(&self) -> f64 {
        self.area() * self.length
    }

    /// On-resonance optical depth `N σ₀ / A`.
    pub fn od(&self) -> f64 {
        self.n_atoms * self.sigma0 / self.area()
    }

    pub fn with_atoms(&self, n_atoms: f64) -> Result<Self> {
        if !(n_atoms.is_finite() && n_atoms > 0.0) {
            return Err(Error::validation(format!("atom number must be positive, got {n_atoms}")));
        }
        Ok(CloudParams { n_atoms, ..*self })
    }
}

/// `γ₀ = (Γ/4)·OD` in rad/s, cross-checked against `N g δt α₀ / ħ` with
/// `g = ω₀/2ε₀V` and `δt = L/c`.
pub fn gamma0(species: &AtomSpecies, cloud: &CloudParams) -> Result<f64> {
    let via_od = species.linewidth / 4.0 * cloud.od();
    let omega0 = 2.0 * PI * SPEED_OF_LIGHT / species.wavelength;
    let coupling = omega0 / (2.0 * EPSILON_0 * cloud.volume());
    let transit = cloud.length() / SPEED_OF_LIGHT;
    let direct = cloud.n_atoms() * coupling * transit * alpha_zero(species.linewidth, species.wavelength) / HBAR;
    let scale = via_od.abs().max(direct.abs());
    if (via_od - direct).abs() > GAMMA0_TOLERANCE * scale {
        return Err(Error::Consistency(format!("γ₀ routes disagree: {via_od:e} vs {direct:e}")));
    }
    Ok(via_od)
}
