//! Polarizability dyad of a ground hyperfine manifold and its irreducible
//! rank-0/1/2 parts.
//!
//! Two routes are provided and are expected to agree:
//!
//! * the dyad route builds Wigner-Eckart dipole blocks, forms
//!   `d_q d†_q'` and projects onto rank `j` with Clebsch-Gordan sums;
//! * the closed-form route writes each component directly in terms of spin
//!   matrices scaled by the coefficients `α^(j)_{f,f'} / α₀`.
//!
//! Dyad matrices are in units of `|⟨j‖d‖j'⟩|²`; tensor operators are
//! reported in units of `α₀`.

mod closed_form;
mod dyad;

use std::f64::consts::PI;

pub use closed_form::{alpha_coefficients, irreducible_tensor_operator, irreducible_tensor_operators};
pub use dyad::{
    dipole_block, extract_alpha_coefficients, polarizability_dyad, project_dyad_onto_rank, reconstruct_dyad,
    reduced_element_factor, DipoleBlock, PolarizabilityDyad,
};

use crate::angular::{triangle, HalfInt};
use crate::constants::{EPSILON_0, HBAR};
use crate::{CMatrix, Error, Result};

/// Angular quantum numbers of a fine-structure line `j → j'` in an atom with
/// nuclear spin `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub nuclear_spin: HalfInt,
    pub ground_j: HalfInt,
    pub excited_j: HalfInt,
}

impl Transition {
    pub fn new(nuclear_spin: HalfInt, ground_j: HalfInt, excited_j: HalfInt) -> Result<Self> {
        if nuclear_spin.twice() < 0 || ground_j.twice() < 0 || excited_j.twice() < 0 {
            return Err(Error::domain("angular momenta must be non-negative"));
        }
        if !triangle(ground_j, HalfInt::ONE, excited_j) {
            return Err(Error::domain(format!("j={ground_j} → j'={excited_j} is not a dipole transition")));
        }
        Ok(Transition { nuclear_spin, ground_j, excited_j })
    }

    /// The alkali D2 line (`j = 1/2 → j' = 3/2`).
    pub fn d2(nuclear_spin: HalfInt) -> Self {
        Transition { nuclear_spin, ground_j: HalfInt::HALF, excited_j: HalfInt::from_twice(3) }
    }

    pub fn ground_levels(&self) -> Vec<HalfInt> {
        coupled_range(self.ground_j, self.nuclear_spin)
    }

    pub fn excited_levels(&self) -> Vec<HalfInt> {
        coupled_range(self.excited_j, self.nuclear_spin)
    }

    fn check_levels(&self, f: HalfInt, fprime: HalfInt) -> Result<()> {
        if !triangle(self.ground_j, self.nuclear_spin, f) {
            return Err(Error::domain(format!(
                "f={f} cannot be formed from j={} and i={}",
                self.ground_j, self.nuclear_spin
            )));
        }
        if !triangle(self.excited_j, self.nuclear_spin, fprime) {
            return Err(Error::domain(format!(
                "f'={fprime} cannot be formed from j'={} and i={}",
                self.excited_j, self.nuclear_spin
            )));
        }
        Ok(())
    }

    /// `|⟨j‖d‖j'⟩|²` expressed in units of `α₀`.
    pub fn reduced_squared_in_alpha0(&self) -> f64 {
        f64::from(self.excited_j.twice() + 1) / f64::from(self.ground_j.twice() + 1)
    }
}

fn coupled_range(a: HalfInt, b: HalfInt) -> Vec<HalfInt> {
    let lo = (a - b).abs().twice();
    let hi = (a + b).twice();
    (lo..=hi).step_by(2).map(HalfInt::from_twice).collect()
}

/// Rank of an irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Scalar = 0,
    Vector = 1,
    Tensor = 2,
}

impl Rank {
    pub const ALL: [Rank; 3] = [Rank::Scalar, Rank::Vector, Rank::Tensor];

    pub fn value(self) -> i32 {
        self as i32
    }

    pub fn components(self) -> impl Iterator<Item = i32> {
        let j = self.value();
        (-j..=j).rev()
    }
}

impl TryFrom<i32> for Rank {
    type Error = Error;
    fn try_from(j: i32) -> Result<Self> {
        match j {
            0 => Ok(Rank::Scalar),
            1 => Ok(Rank::Vector),
            2 => Ok(Rank::Tensor),
            _ => Err(Error::domain(format!("rank must be 0, 1 or 2, got {j}"))),
        }
    }
}

/// Component `T^(j)_m` of an irreducible tensor operator on the ground manifold.
#[derive(Clone, Debug)]
pub struct TensorOperator {
    pub rank: Rank,
    pub component: i32,
    pub matrix: CMatrix,
}

/// `α^(j)_{f,f'} / α₀` for `j = 0, 1, 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrreducibleCoefficients {
    pub f: HalfInt,
    pub fprime: HalfInt,
    pub scalar: f64,
    pub vector: f64,
    pub tensor: f64,
}

impl IrreducibleCoefficients {
    pub fn get(&self, rank: Rank) -> f64 {
        match rank {
            Rank::Scalar => self.scalar,
            Rank::Vector => self.vector,
            Rank::Tensor => self.tensor,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.scalar, self.vector, self.tensor]
    }
}

/// Polarizability scale `α₀ = 3 ε₀ ħ Γ λ₀³ / 8π²` in SI units (C²·m²/J).
///
/// `linewidth` is the spontaneous emission rate Γ in s⁻¹, `wavelength` in m.
pub fn alpha_zero(linewidth: f64, wavelength: f64) -> f64 {
    3.0 * EPSILON_0 * HBAR * linewidth * wavelength.powi(3) / (8.0 * PI * PI)
}

/// Residual above which the closed forms and the dyad are said to disagree.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-12;

/// Largest elementwise difference, in `α₀` units, between the closed-form
/// tensor operators and those projected from the dyad, over all ranks and
/// components of one `(f, f')` pair.
pub fn equivalence_residual(transition: &Transition, f: HalfInt, fprime: HalfInt) -> Result<f64> {
    let dyad = polarizability_dyad(transition, f, fprime)?;
    let closed = irreducible_tensor_operators(transition, f, fprime)?;
    let scale = transition.reduced_squared_in_alpha0();
    let mut worst = 0.0f64;
    for rank in Rank::ALL {
        let projected = project_dyad_onto_rank(&dyad, rank);
        for (p, c) in projected.iter().zip(closed.iter().filter(|t| t.rank == rank)) {
            debug_assert_eq!(p.component, c.component);
            let diff = &p.matrix * num_complex::Complex64::from(scale) - &c.matrix;
            worst = worst.max(diff.iter().map(|z| z.norm()).fold(0.0, f64::max));
        }
    }
    Ok(worst)
}
