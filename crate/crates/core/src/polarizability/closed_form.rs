use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use num_complex::Complex64;

use super::{IrreducibleCoefficients, Rank, TensorOperator, Transition};
use crate::angular::{spin_matrices, wigner6j, HalfInt, SpinOperatorSet};
use crate::{CMatrix, Error, Result};

/// Closed-form `α^(j)_{f,f'} / α₀`.
///
/// The common factor is `(2j'+1)²/(2j+1)² |{1 j j'; i f' f}|²`; the rank
/// dependence is selected by whether `f' = f-1, f, f+1`. These expressions are
/// exact for the D2 line; for other lines they disagree with
/// [`super::extract_alpha_coefficients`], which
/// [`super::equivalence_residual`] reports.
pub fn alpha_coefficients(transition: &Transition, f: HalfInt, fprime: HalfInt) -> Result<IrreducibleCoefficients> {
    transition.check_levels(f, fprime)?;
    let Transition { nuclear_spin: i, ground_j: j, excited_j: jp } = *transition;
    let zero = IrreducibleCoefficients { f, fprime, scalar: 0.0, vector: 0.0, tensor: 0.0 };
    let sixj = wigner6j(HalfInt::ONE, j, jp, i, fprime, f);
    if sixj == 0.0 {
        return Ok(zero);
    }
    let weight = (f64::from(jp.twice() + 1) / f64::from(j.twice() + 1)).powi(2) * sixj * sixj;
    let fv = f.value();
    let [scalar, vector, tensor] = match fprime.twice() - f.twice() {
        -2 => [2.0 * fv - 1.0, -(2.0 * fv - 1.0) / fv, 1.0 / fv],
        0 => {
            let c = (2.0 * fv + 1.0) / (fv * (fv + 1.0));
            [2.0 * fv + 1.0, -c, -c]
        }
        2 => [2.0 * fv + 3.0, (2.0 * fv + 3.0) / (fv + 1.0), 1.0 / (fv + 1.0)],
        _ => return Ok(zero),
    };
    Ok(IrreducibleCoefficients { f, fprime, scalar: weight * scalar, vector: weight * vector, tensor: weight * tensor })
}

/// Spin-operator form of `T^(j)_m` with unit coefficient `α^(j) = 1`.
pub(crate) fn unit_tensor_operator(spins: &SpinOperatorSet, rank: Rank, m: i32) -> CMatrix {
    let c = Complex64::from;
    let id = spins.identity();
    let fv = spins.f.value();
    match (rank, m) {
        (Rank::Scalar, 0) => id * c(-1.0 / 3f64.sqrt()),
        (Rank::Vector, 0) => &spins.fz * c(FRAC_1_SQRT_2),
        (Rank::Vector, 1) => spins.spherical_plus() * c(FRAC_1_SQRT_2),
        (Rank::Vector, -1) => spins.spherical_minus() * c(FRAC_1_SQRT_2),
        (Rank::Tensor, 0) => (&spins.fz * &spins.fz * c(3.0) - &id * c(fv * (fv + 1.0))) * c(-1.0 / 6f64.sqrt()),
        (Rank::Tensor, 1) => spins.spherical_plus() * (&spins.fz + &id * c(0.5)) * c(-SQRT_2),
        (Rank::Tensor, -1) => spins.spherical_minus() * (&spins.fz - &id * c(0.5)) * c(-SQRT_2),
        (Rank::Tensor, 2) => {
            let p = spins.spherical_plus();
            &p * &p * c(-1.0)
        }
        (Rank::Tensor, -2) => {
            let p = spins.spherical_minus();
            &p * &p * c(-1.0)
        }
        _ => unreachable!("component {m} outside rank {}", rank.value()),
    }
}

/// `T^(j)_m` from the spin-operator closed forms, in units of `α₀`.
pub fn irreducible_tensor_operator(
    transition: &Transition,
    f: HalfInt,
    fprime: HalfInt,
    rank: Rank,
    m: i32,
) -> Result<TensorOperator> {
    if m.abs() > rank.value() {
        return Err(Error::domain(format!("component {m} outside rank {}", rank.value())));
    }
    let alpha = alpha_coefficients(transition, f, fprime)?.get(rank);
    let spins = spin_matrices(f)?;
    let matrix = unit_tensor_operator(&spins, rank, m) * Complex64::from(alpha);
    Ok(TensorOperator { rank, component: m, matrix })
}

/// All nine components, ordered by rank then descending `m`.
pub fn irreducible_tensor_operators(
    transition: &Transition,
    f: HalfInt,
    fprime: HalfInt,
) -> Result<Vec<TensorOperator>> {
    let alpha = alpha_coefficients(transition, f, fprime)?;
    let spins = spin_matrices(f)?;
    Ok(Rank::ALL
        .into_iter()
        .flat_map(|rank| rank.components().map(move |m| (rank, m)))
        .map(|(rank, m)| TensorOperator {
            rank,
            component: m,
            matrix: unit_tensor_operator(&spins, rank, m) * Complex64::from(alpha.get(rank)),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs() -> Transition {
        Transition::d2(HalfInt::from_twice(7))
    }

    #[test]
    fn forbidden_level_has_no_coefficients() {
        let a = alpha_coefficients(&cs(), HalfInt::from_int(4), HalfInt::from_int(2)).unwrap();
        assert_eq!(a.as_array(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn vector_signs() {
        let f = HalfInt::from_int(4);
        assert!(alpha_coefficients(&cs(), f, HalfInt::from_int(5)).unwrap().vector > 0.0);
        assert!(alpha_coefficients(&cs(), f, HalfInt::from_int(3)).unwrap().vector < 0.0);
    }

    #[test]
    fn spin_half_tensor_vanishes() {
        let tr = Transition::d2(HalfInt::ZERO);
        for m in Rank::Tensor.components() {
            let t = irreducible_tensor_operator(&tr, HalfInt::HALF, HalfInt::from_twice(3), Rank::Tensor, m).unwrap();
            assert!(t.matrix.iter().all(|z| z.norm() <= 1e-14));
        }
    }

    #[test]
    fn scalar_is_identity() {
        let t =
            irreducible_tensor_operator(&cs(), HalfInt::from_int(4), HalfInt::from_int(5), Rank::Scalar, 0).unwrap();
        let d = t.matrix[(0, 0)];
        assert!((t.matrix.clone() - CMatrix::identity(9, 9) * d).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn bad_component() {
        assert!(
            irreducible_tensor_operator(&cs(), HalfInt::from_int(4), HalfInt::from_int(5), Rank::Vector, 2).is_err()
        );
    }
}
