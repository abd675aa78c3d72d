use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use super::halfint::HalfInt;
use crate::{CMatrix, Error, Result};

/// Cartesian spin matrices for one manifold, ħ = 1, basis `m = f, f-1, ..., -f`.
#[derive(Clone, Debug)]
pub struct SpinOperatorSet {
    pub f: HalfInt,
    pub fx: CMatrix,
    pub fy: CMatrix,
    pub fz: CMatrix,
}

impl SpinOperatorSet {
    pub fn dim(&self) -> usize {
        self.fz.nrows()
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim(), self.dim())
    }

    /// Raising operator `fx + i fy` (no √2).
    pub fn raising(&self) -> CMatrix {
        &self.fx + &self.fy * Complex64::i()
    }

    /// Lowering operator `fx - i fy`.
    pub fn lowering(&self) -> CMatrix {
        &self.fx - &self.fy * Complex64::i()
    }

    /// Spherical component `f₊ = -(fx + i fy)/√2`.
    pub fn spherical_plus(&self) -> CMatrix {
        self.raising() * Complex64::from(-std::f64::consts::FRAC_1_SQRT_2)
    }

    /// Spherical component `f₋ = (fx - i fy)/√2`.
    pub fn spherical_minus(&self) -> CMatrix {
        self.lowering() * Complex64::from(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// `fx² + fy² + fz²`.
    pub fn casimir(&self) -> CMatrix {
        &self.fx * &self.fx + &self.fy * &self.fy + &self.fz * &self.fz
    }
}

/// Builds the spin matrices of a manifold with total angular momentum `f`.
///
/// `f = 0` yields 1×1 zero matrices.
pub fn spin_matrices(f: HalfInt) -> Result<SpinOperatorSet> {
    if f.twice() < 0 {
        return Err(Error::domain(format!("spin must be non-negative, got {f}")));
    }
    let dim = f.dim();
    let fv = f.value();
    let mut raising = CMatrix::zeros(dim, dim);
    let mut fz = CMatrix::zeros(dim, dim);
    for (k, m) in f.projections().enumerate() {
        let m = m.value();
        fz[(k, k)] = Complex64::from(m);
        if k > 0 {
            // ⟨m+1| f₊ |m⟩
            raising[(k - 1, k)] = Complex64::from((fv * (fv + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    let lowering = raising.adjoint();
    let fx = (&raising + &lowering) * Complex64::from(0.5);
    let fy = (&raising - &lowering) * Complex64::new(0.0, -0.5);
    Ok(SpinOperatorSet { f, fx, fy, fz })
}

/// Direction of a coherent spin state in spherical coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinOrientation {
    theta: f64,
    phi: f64,
}

impl SpinOrientation {
    /// `theta ∈ [0, π]`; `phi` is reduced into `[0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !phi.is_finite() {
            return Err(Error::domain(format!("orientation (θ={theta}, φ={phi}) out of range")));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(SpinOrientation { theta, phi })
    }

    /// Accepts a signed polar angle, mapping `(-θ, φ)` to `(θ, φ + π)`.
    pub fn from_signed(theta: f64, phi: f64) -> Result<Self> {
        if theta < 0.0 {
            Self::new(-theta, phi + PI)
        } else {
            Self::new(theta, phi)
        }
    }

    /// Spin along the laboratory x axis.
    pub fn along_x() -> Self {
        SpinOrientation { theta: PI / 2.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Single-atom moments of the coherent state `exp(-i fz φ) exp(-i fy θ) |f, f⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentSpinMoments {
    /// `⟨fz⟩`
    pub fz_mean: f64,
    /// `⟨fx² - fy²⟩`
    pub quad_diff: f64,
    /// `⟨fx fy + fy fx⟩`
    pub quad_cross: f64,
}

pub fn coherent_spin_moments(f: HalfInt, orient: SpinOrientation) -> CoherentSpinMoments {
    let fv = f.value();
    let (theta, phi) = (orient.theta, orient.phi);
    let transverse = fv * (fv - 0.5) * theta.sin().powi(2);
    CoherentSpinMoments {
        fz_mean: fv * theta.cos(),
        quad_diff: transverse * (2.0 * phi).cos(),
        quad_cross: transverse * (2.0 * phi).sin(),
    }
}
