//! Semiclassical Stokes-vector dynamics: the rotation generator γ produced by
//! a fixed atomic spin state, exact and small-angle rotations of the probe
//! polarization, and the trajectory and detuning-scan experiments built on
//! them.

mod analysis;
mod cloud;
mod rotation;
mod trajectory;

pub use analysis::{fit_log_log_slope, local_log_log_slopes, zero_crossing_frequency, zero_crossings};
pub use cloud::{gamma0, CloudParams, GAMMA0_TOLERANCE};
pub use rotation::{
    rotate_stokes_exact, rotate_stokes_small, GammaVector, SmallAngleRotation, StokesVector, SMALL_ANGLE_LIMIT,
};
pub use trajectory::{
    detuning_scan, signed_peak, simulate_trajectory, PathKind, PathSpec, ScanPoint, TrajectoryPoint, TrajectoryResult,
};

use crate::angular::{coherent_spin_moments, SpinOrientation};
use crate::atomdata::AtomSpecies;
use crate::measurement::ProbeParams;
use crate::polarizability::alpha_coefficients;
use crate::Result;

/// Detuning-weighted coefficient sums `Σ_{f'} α^(j)_{f,f'} / (α₀ Δ_{f,f'})`,
/// in s/rad.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineSums {
    pub scalar: f64,
    pub vector: f64,
    pub tensor: f64,
}

pub fn line_sums(species: &AtomSpecies, probe_detuning: f64) -> Result<LineSums> {
    let transition = species.transition();
    let mut sums = LineSums { scalar: 0.0, vector: 0.0, tensor: 0.0 };
    for (fprime, delta) in species.line_detunings(probe_detuning)? {
        let a = alpha_coefficients(&transition, species.ground_f, fprime)?;
        sums.scalar += a.scalar / delta;
        sums.vector += a.vector / delta;
        sums.tensor += a.tensor / delta;
    }
    Ok(sums)
}

/// Rotation generator for a coherent spin state with the given orientation.
///
/// Terms proportional to `S₀` commute with every Stokes component and are
/// left out.
pub fn gamma_vector(
    species: &AtomSpecies,
    cloud: &CloudParams,
    probe: &ProbeParams,
    orient: SpinOrientation,
) -> Result<GammaVector> {
    let g0 = gamma0(species, cloud)?;
    let sums = line_sums(species, probe.detuning())?;
    Ok(gamma_from_sums(g0, &sums, species, orient))
}

pub(crate) fn gamma_from_sums(g0: f64, sums: &LineSums, species: &AtomSpecies, orient: SpinOrientation) -> GammaVector {
    let moments = coherent_spin_moments(species.ground_f, orient);
    GammaVector {
        gx: g0 * moments.quad_diff * sums.tensor,
        gy: g0 * moments.quad_cross * sums.tensor,
        gz: g0 * moments.fz_mean * sums.vector,
    }
}
