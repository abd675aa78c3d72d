use num_complex::Complex64;

use super::closed_form::unit_tensor_operator;
use super::{IrreducibleCoefficients, Rank, TensorOperator, Transition};
use crate::angular::{cg_unchecked, spin_matrices, wigner6j, HalfInt};
use crate::{CMatrix, Result};

/// Hyperfine reduction `⟨f‖d‖f'⟩ / ⟨j‖d‖j'⟩`, sign included. Zero for pairs
/// that do not couple.
pub fn reduced_element_factor(transition: &Transition, f: HalfInt, fprime: HalfInt) -> Result<f64> {
    transition.check_levels(f, fprime)?;
    let Transition { nuclear_spin: i, ground_j: j, excited_j: jp } = *transition;
    let sixj = wigner6j(HalfInt::ONE, j, jp, i, fprime, f);
    if sixj == 0.0 {
        return Ok(0.0);
    }
    let phase_twice = fprime.twice() + j.twice() + i.twice() + 2;
    let sign = if (phase_twice / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let weight = f64::from((fprime.twice() + 1) * (j.twice() + 1)).sqrt();
    Ok(sign * weight * sixj)
}

/// Spherical components `d_q` (q = -1, 0, +1) of the dipole lowering
/// operator restricted to `f' → f`, in units of `⟨j‖d‖j'⟩`.
///
/// Rows index the ground projections `m`, columns the excited `m'`.
#[derive(Clone, Debug)]
pub struct DipoleBlock {
    pub f: HalfInt,
    pub fprime: HalfInt,
    components: [CMatrix; 3],
}

impl DipoleBlock {
    /// `d_q`; panics unless `q ∈ {-1, 0, 1}`.
    pub fn q(&self, q: i32) -> &CMatrix {
        &self.components[qi(q)]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.iter().all(|z| *z == Complex64::from(0.0)))
    }
}

fn qi(q: i32) -> usize {
    assert!((-1..=1).contains(&q), "spherical index {q} out of range");
    (q + 1) as usize
}

/// `⟨f m| d_q |f' m'⟩ = ⟨1 q; f' m-q | f m⟩ ⟨f‖d‖f'⟩`.
pub fn dipole_block(transition: &Transition, f: HalfInt, fprime: HalfInt) -> Result<DipoleBlock> {
    let reduced = reduced_element_factor(transition, f, fprime)?;
    let components = [-1, 0, 1].map(|q| {
        let mut d = CMatrix::zeros(f.dim(), fprime.dim());
        if reduced != 0.0 {
            let qh = HalfInt::from_int(q);
            for (r, m) in f.projections().enumerate() {
                let mp = m - qh;
                if mp.is_projection_of(fprime) {
                    let cg = cg_unchecked(HalfInt::ONE, qh, fprime, mp, f, m);
                    d[(r, fprime.index_of(mp))] = Complex64::from(cg * reduced);
                }
            }
        }
        d
    });
    Ok(DipoleBlock { f, fprime, components })
}

/// Matrices `A_{q,q'} = d_q d_{q'}†` on the ground manifold for one excited
/// level, in units of `|⟨j‖d‖j'⟩|²`.
#[derive(Clone, Debug)]
pub struct PolarizabilityDyad {
    pub transition: Transition,
    pub f: HalfInt,
    pub fprime: HalfInt,
    components: [[CMatrix; 3]; 3],
}

impl PolarizabilityDyad {
    /// `A_{q,q'}` (matrix adjoint of `d_{q'}`).
    pub fn component(&self, q: i32, qp: i32) -> &CMatrix {
        &self.components[qi(q)][qi(qp)]
    }

    /// Product `d_q (d†)_{q'}` of spherical components, using
    /// `(d†)_{q'} = (-1)^{q'} (d_{-q'})†`.
    pub fn spherical_product(&self, q: i32, qp: i32) -> CMatrix {
        let sign = if qp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        self.component(q, -qp) * Complex64::from(sign)
    }

    /// `Σ_q A_{q,q}`
    pub fn helicity_trace(&self) -> CMatrix {
        self.component(-1, -1) + self.component(0, 0) + self.component(1, 1)
    }
}

pub fn polarizability_dyad(transition: &Transition, f: HalfInt, fprime: HalfInt) -> Result<PolarizabilityDyad> {
    let block = dipole_block(transition, f, fprime)?;
    let components = [-1, 0, 1].map(|q| [-1, 0, 1].map(|qp| block.q(q) * block.q(qp).adjoint()));
    Ok(PolarizabilityDyad { transition: *transition, f, fprime, components })
}

/// `T^(j)_m = Σ_{q,q'} d_q (d†)_{q'} ⟨1 q; 1 q' | j m⟩` for `m = j, ..., -j`,
/// in units of `|⟨j‖d‖j'⟩|²`.
pub fn project_dyad_onto_rank(dyad: &PolarizabilityDyad, rank: Rank) -> Vec<TensorOperator> {
    let j = HalfInt::from_int(rank.value());
    let dim = dyad.f.dim();
    rank.components()
        .map(|m| {
            let mut matrix = CMatrix::zeros(dim, dim);
            for q in -1..=1 {
                let qp = m - q;
                if !(-1..=1).contains(&qp) {
                    continue;
                }
                let cg = cg_unchecked(HalfInt::ONE, q.into(), HalfInt::ONE, qp.into(), j, m.into());
                if cg != 0.0 {
                    matrix += dyad.spherical_product(q, qp) * Complex64::from(cg);
                }
            }
            TensorOperator { rank, component: m, matrix }
        })
        .collect()
}

/// Inverse of the rank projection: rebuilds every `A_{q,q'}` from the nine
/// components `T^(j)_m`, returned as `[[A_{q,q'}]]` indexed by `q+1, q'+1`.
pub fn reconstruct_dyad(components: &[TensorOperator]) -> [[CMatrix; 3]; 3] {
    let dim = components.first().map_or(0, |t| t.matrix.nrows());
    [-1, 0, 1].map(|q: i32| {
        [-1, 0, 1].map(|qp: i32| {
            // A_{q,q'} = (-1)^{q'} d_q (d†)_{-q'}
            let sign = if qp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let mut a = CMatrix::zeros(dim, dim);
            for t in components {
                let j = HalfInt::from_int(t.rank.value());
                if q - qp != t.component {
                    continue;
                }
                let cg = cg_unchecked(HalfInt::ONE, q.into(), HalfInt::ONE, (-qp).into(), j, t.component.into());
                a += &t.matrix * Complex64::from(sign * cg);
            }
            a
        })
    })
}

/// Recovers `α^(j)_{f,f'}/α₀` from the dyad by least-squares matching of
/// the projected components onto the spin-operator forms of unit strength.
pub fn extract_alpha_coefficients(dyad: &PolarizabilityDyad) -> Result<IrreducibleCoefficients> {
    let spins = spin_matrices(dyad.f)?;
    let scale = dyad.transition.reduced_squared_in_alpha0();
    let mut coefficient = [0.0; 3];
    for rank in Rank::ALL {
        let mut num = 0.0;
        let mut den = 0.0;
        for projected in project_dyad_onto_rank(dyad, rank) {
            let basis = unit_tensor_operator(&spins, rank, projected.component);
            num += basis.dotc(&projected.matrix).re;
            den += basis.norm_squared();
        }
        coefficient[rank.value() as usize] = if den > 0.0 { scale * num / den } else { 0.0 };
    }
    Ok(IrreducibleCoefficients {
        f: dyad.f,
        fprime: dyad.fprime,
        scalar: coefficient[0],
        vector: coefficient[1],
        tensor: coefficient[2],
    })
}
