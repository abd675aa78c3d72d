//! Angular-momentum engine: quantum numbers, coupling coefficients and spin
//! operators in the Condon-Shortley convention.

mod coupling;
mod halfint;
mod spin;

pub(crate) use coupling::cg_unchecked;
pub use coupling::{clebsch_gordan, wigner6j};
pub use halfint::{triangle, HalfInt};
pub use spin::{coherent_spin_moments, spin_matrices, CoherentSpinMoments, SpinOperatorSet, SpinOrientation};
