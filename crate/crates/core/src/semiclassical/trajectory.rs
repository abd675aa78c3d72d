use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use super::{gamma0, gamma_from_sums, line_sums, rotate_stokes_exact, CloudParams, StokesVector};
use crate::angular::SpinOrientation;
use crate::atomdata::AtomSpecies;
use crate::measurement::ProbeParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathKind {
    /// θ from π/2 to −π/2 at φ = 0: spin rotated about y.
    XzPlane,
    /// φ from 0 to π at θ = π/2: spin rotated about z.
    XyPlane,
    Custom,
}

/// Sequence of spin orientations the atoms adiabatically follow.
#[derive(Clone, Debug, PartialEq)]
pub struct PathSpec {
    pub kind: PathKind,
    pub samples: usize,
    pub custom_points: Vec<SpinOrientation>,
}

impl PathSpec {
    pub fn xz_plane(samples: usize) -> Result<Self> {
        Self::swept(PathKind::XzPlane, samples)
    }

    pub fn xy_plane(samples: usize) -> Result<Self> {
        Self::swept(PathKind::XyPlane, samples)
    }

    fn swept(kind: PathKind, samples: usize) -> Result<Self> {
        if samples == 0 {
            return Err(Error::validation("a path needs at least one sample"));
        }
        Ok(PathSpec { kind, samples, custom_points: vec![] })
    }

    pub fn custom(points: Vec<SpinOrientation>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::validation("a path needs at least one sample"));
        }
        Ok(PathSpec { kind: PathKind::Custom, samples: points.len(), custom_points: points })
    }

    /// `(path parameter, orientation)` pairs. Custom paths are parametrized
    /// by accumulated arc length on the unit sphere.
    pub fn points(&self) -> Result<Vec<(f64, SpinOrientation)>> {
        let n = self.samples;
        let span = (n.max(2) - 1) as f64;
        match self.kind {
            PathKind::XzPlane => (0..n)
                .map(|k| {
                    // exact zero at the midpoint of an odd grid
                    let theta = PI * (span - 2.0 * k as f64) / (2.0 * span);
                    Ok((theta, SpinOrientation::from_signed(theta, 0.0)?))
                })
                .collect(),
            PathKind::XyPlane => (0..n)
                .map(|k| {
                    let phi = PI * k as f64 / span;
                    Ok((phi, SpinOrientation::new(FRAC_PI_2, phi)?))
                })
                .collect(),
            PathKind::Custom => {
                let mut arc = 0.0;
                let mut prev: Option<[f64; 3]> = None;
                Ok(self
                    .custom_points
                    .iter()
                    .map(|&o| {
                        let u = unit_vector(o);
                        if let Some(p) = prev {
                            let d = (p[0] * u[0] + p[1] * u[1] + p[2] * u[2]).clamp(-1.0, 1.0);
                            arc += d.acos();
                        }
                        prev = Some(u);
                        (arc, o)
                    })
                    .collect())
            }
        }
    }
}

fn unit_vector(o: SpinOrientation) -> [f64; 3] {
    let (st, ct) = o.theta().sin_cos();
    let (sp, cp) = o.phi().sin_cos();
    [st * cp, st * sp, ct]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub parameter: f64,
    pub sy_norm: f64,
    pub sz_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryResult {
    pub kind: PathKind,
    pub points: Vec<TrajectoryPoint>,
}

impl TrajectoryResult {
    pub fn parameters(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.parameter).collect()
    }

    pub fn sy(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.sy_norm).collect()
    }

    pub fn sz(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.sz_norm).collect()
    }
}

/// Output Stokes components along a path, normalized by the input `S₀`.
///
/// Each sample is independent: the spin state is held fixed while the probe
/// passes, with no back-action.
pub fn simulate_trajectory(
    species: &AtomSpecies,
    cloud: &CloudParams,
    probe: &ProbeParams,
    path: &PathSpec,
) -> Result<TrajectoryResult> {
    let g0 = gamma0(species, cloud)?;
    let sums = line_sums(species, probe.detuning())?;
    let input = StokesVector::linear(probe.pol_angle());
    let points = path
        .points()?
        .into_par_iter()
        .map(|(parameter, orient)| {
            let out = rotate_stokes_exact(input, gamma_from_sums(g0, &sums, species, orient));
            TrajectoryPoint { parameter, sy_norm: out.sy / input.s0, sz_norm: out.sz / input.s0 }
        })
        .collect();
    Ok(TrajectoryResult { kind: path.kind, points })
}

/// The entry of largest magnitude, keeping its sign; the first wins a tie.
pub fn signed_peak(values: &[f64]) -> f64 {
    values.iter().fold(0.0, |best: f64, &v| if v.abs() > best.abs() { v } else { best })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    /// Probe detuning in rad/s.
    pub detuning: f64,
    /// Signed peak of `Sy` over the xz path.
    pub vector_peak: f64,
    /// Signed peak of `Sz` over the xy path.
    pub tensor_peak: f64,
}

pub fn detuning_scan(
    species: &AtomSpecies,
    cloud: &CloudParams,
    probe_template: &ProbeParams,
    detunings: &[f64],
    samples: usize,
) -> Result<Vec<ScanPoint>> {
    let xz = PathSpec::xz_plane(samples)?;
    let xy = PathSpec::xy_plane(samples)?;
    detunings
        .par_iter()
        .map(|&detuning| {
            let probe = probe_template.with_detuning(detuning)?;
            let vector = simulate_trajectory(species, cloud, &probe, &xz)?;
            let tensor = simulate_trajectory(species, cloud, &probe, &xy)?;
            Ok(ScanPoint { detuning, vector_peak: signed_peak(&vector.sy()), tensor_peak: signed_peak(&tensor.sz()) })
        })
        .collect()
}
