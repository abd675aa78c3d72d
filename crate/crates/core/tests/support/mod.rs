//! Reference implementations shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use polariscope::angular::{spin_matrices, HalfInt};
use polariscope::CMatrix;

#[allow(unused_imports)]
pub use polariscope_validation::{cg, sixj};

/// `⟨Ψ|O|Ψ⟩` for `|Ψ⟩ = exp(-i fz φ) exp(-i fy θ) |f, f⟩`, by matrix
/// exponentials. Returns `(⟨fz⟩, ⟨fx² − fy²⟩, ⟨fx fy + fy fx⟩)`.
pub fn coherent_moments_by_rotation(f: HalfInt, theta: f64, phi: f64) -> (f64, f64, f64) {
    let s = spin_matrices(f).unwrap();
    let mi = Complex64::new(0.0, -1.0);
    let rot = (&s.fz * (mi * phi)).exp() * (&s.fy * (mi * theta)).exp();
    let mut top = CMatrix::zeros(s.dim(), 1);
    top[(0, 0)] = Complex64::from(1.0);
    let psi = rot * top;
    let expect = |op: &CMatrix| (psi.adjoint() * op * &psi)[(0, 0)].re;
    let quad_diff = &s.fx * &s.fx - &s.fy * &s.fy;
    let quad_cross = &s.fx * &s.fy + &s.fy * &s.fx;
    (expect(&s.fz), expect(&quad_diff), expect(&quad_cross))
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Spins `0, 1/2, ..., max_twice/2`.
pub fn spins_up_to(max_twice: i32) -> impl Iterator<Item = HalfInt> {
    (0..=max_twice).map(HalfInt::from_twice)
}
