//! Off-resonant polarimetric probing of multilevel alkali atoms.
//!
//! The crate is organised bottom-up:
//!
//! * [`angular`]: half-integer quantum numbers, Clebsch-Gordan and 6-j
//!   coefficients, spin matrices and coherent-spin-state moments.
//! * [`polarizability`]: dipole blocks, the polarizability dyad and its
//!   rank-0/1/2 decomposition, computed both by projection and in closed form.
//! * [`semiclassical`]: the Stokes rotation vector, exact and small-angle
//!   Stokes rotations, trajectory experiments and detuning scans.
//! * [`measurement`]: scattering strength, shot noise, measurement strength,
//!   simulated photocurrents, the constant-parameter filter and squeezing.
//! * [`atomdata`]: species and experiment configuration files, including the
//!   shipped cesium D2 dataset.
//!
//! Angular momenta are dimensionless (ħ = 1) everywhere except where a
//! function documents SI units.

pub mod angular;
pub mod atomdata;
pub mod constants;
mod error;
pub mod measurement;
pub mod polarizability;
pub mod semiclassical;

pub use error::{Error, Result};

/// Dense complex matrix used for all operators on a hyperfine manifold.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
