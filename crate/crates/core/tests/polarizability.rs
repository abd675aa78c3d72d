#![allow(clippy::excessive_precision)]

mod support;

use num_complex::Complex64;
use polariscope::angular::{clebsch_gordan, spin_matrices, HalfInt};
use polariscope::atomdata::cesium_d2;
use polariscope::polarizability::{
    alpha_coefficients, alpha_zero, dipole_block, equivalence_residual, extract_alpha_coefficients,
    irreducible_tensor_operator, irreducible_tensor_operators, polarizability_dyad, project_dyad_onto_rank,
    reconstruct_dyad, reduced_element_factor, Rank, TensorOperator, Transition,
};
use polariscope::CMatrix;
use support::max_abs;

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn cs() -> Transition {
    Transition::d2(h(7))
}

// ⟨f‖d‖f'⟩/⟨j‖d‖j'⟩ for cesium f = 4 (sympy, 20 digits).
const REDUCED_4_5: f64 = 0.781_735_959_970_571_592_43;
const REDUCED_4_4: f64 = 0.540_061_724_867_321_685_91;
const REDUCED_4_3: f64 = 0.311_804_782_231_161_782_13;

// α^(0,1,2)/α₀ for cesium f = 4 (exact rationals).
const ALPHA_4_5: [f64; 3] = [11.0 / 9.0, 11.0 / 45.0, 1.0 / 45.0];
const ALPHA_4_4: [f64; 3] = [7.0 / 12.0, -7.0 / 240.0, -7.0 / 240.0];
const ALPHA_4_3: [f64; 3] = [7.0 / 36.0, -7.0 / 144.0, 1.0 / 144.0];

const ALPHA_ZERO_CS: f64 = 7.224_698_568_860_429_972_5e-58;

/// Both ground manifolds of a D2 line with `f` in the upper or lower one.
fn d2_cases() -> Vec<(Transition, HalfInt)> {
    let mut out = vec![];
    for twice_f in [1, 2, 3, 4, 6, 8] {
        let f = h(twice_f);
        for i in [f - HalfInt::HALF, f + HalfInt::HALF] {
            if i.twice() >= 0 {
                out.push((Transition::d2(i), f));
            }
        }
    }
    out
}

#[test]
fn reduced_factor_fixtures() {
    let f = h(8);
    let cases = [(10, REDUCED_4_5), (8, REDUCED_4_4), (6, REDUCED_4_3), (4, 0.0)];
    for (fp, expected) in cases {
        let v = reduced_element_factor(&cs(), f, h(fp)).unwrap();
        assert!((v - expected).abs() < 1e-15, "f'={fp}: {v}");
    }
}

#[test]
fn alpha_coefficient_fixtures() {
    let f = h(8);
    for (fp, expected) in [(10, ALPHA_4_5), (8, ALPHA_4_4), (6, ALPHA_4_3)] {
        let a = alpha_coefficients(&cs(), f, h(fp)).unwrap().as_array();
        for k in 0..3 {
            assert!((a[k] - expected[k]).abs() < 1e-15, "f'={fp} rank {k}: {}", a[k]);
        }
    }
    assert_eq!(alpha_coefficients(&cs(), f, h(4)).unwrap().as_array(), [0.0; 3]);
    let levels = [6, 8, 10].map(|fp| alpha_coefficients(&cs(), f, h(fp)).unwrap());
    let vector: f64 = levels.iter().map(|a| a.vector).sum();
    let tensor: f64 = levels.iter().map(|a| a.tensor).sum();
    assert!((vector - 1.0 / 6.0).abs() < 1e-15);
    assert!(tensor.abs() < 1e-15);
}

#[test]
fn alpha_zero_fixture() {
    let species = cesium_d2();
    let a = alpha_zero(species.linewidth, species.wavelength);
    assert!((a - ALPHA_ZERO_CS).abs() < 1e-12 * ALPHA_ZERO_CS);
}

#[test]
fn dipole_stretched_entry() {
    let block = dipole_block(&cs(), h(8), h(10)).unwrap();
    let cg = clebsch_gordan(h(2), h(0), h(10), h(8), h(8), h(8)).unwrap();
    let expected = cg * REDUCED_4_5;
    assert!((block.q(0)[(0, 1)].re - expected).abs() < 1e-15);
    assert!((cg + 0.404_519_917_477_945_251_75).abs() < 1e-15);
}

#[test]
fn closed_forms_equal_dyad_projection() {
    for (tr, f) in d2_cases() {
        for fp in tr.excited_levels() {
            let r = equivalence_residual(&tr, f, fp).unwrap();
            assert!(r <= 1e-12, "i={} f={f} f'={fp}: residual {r:e}", tr.nuclear_spin);
        }
    }
}

#[test]
fn extracted_coefficients_match_closed_form() {
    for (tr, f) in d2_cases() {
        for fp in tr.excited_levels() {
            let dyad = polarizability_dyad(&tr, f, fp).unwrap();
            let extracted = extract_alpha_coefficients(&dyad).unwrap().as_array();
            let closed = alpha_coefficients(&tr, f, fp).unwrap().as_array();
            for k in 0..3 {
                if k == 2 && f == HalfInt::HALF {
                    // every rank-2 operator vanishes, so nothing is left to fit
                    assert_eq!(extracted[k], 0.0);
                    continue;
                }
                assert!((extracted[k] - closed[k]).abs() < 1e-12, "f={f} f'={fp} rank {k}");
            }
        }
    }
}

#[test]
fn projections_reconstruct_the_dyad() {
    for (tr, f) in d2_cases() {
        for fp in tr.excited_levels() {
            let dyad = polarizability_dyad(&tr, f, fp).unwrap();
            let parts: Vec<TensorOperator> =
                Rank::ALL.into_iter().flat_map(|r| project_dyad_onto_rank(&dyad, r)).collect();
            let rebuilt = reconstruct_dyad(&parts);
            for q in -1..=1 {
                for qp in -1..=1 {
                    let diff = &rebuilt[(q + 1) as usize][(qp + 1) as usize] - dyad.component(q, qp);
                    assert!(max_abs(&diff) < 1e-12, "f={f} f'={fp} q={q} q'={qp}");
                }
            }
        }
    }
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

#[test]
fn components_are_irreducible() {
    for (tr, f) in d2_cases() {
        let spins = spin_matrices(f).unwrap();
        let (up, down) = (spins.raising(), spins.lowering());
        for fp in tr.excited_levels() {
            let ops = irreducible_tensor_operators(&tr, f, fp).unwrap();
            let get = |rank: Rank, m: i32| ops.iter().find(|t| t.rank == rank && t.component == m);
            for t in &ops {
                let (j, m) = (f64::from(t.rank.value()), f64::from(t.component));
                let fz_defect = commutator(&spins.fz, &t.matrix) - &t.matrix * Complex64::from(m);
                assert!(max_abs(&fz_defect) < 1e-12);
                for (ladder, step) in [(&up, 1), (&down, -1)] {
                    let c = (j * (j + 1.0) - m * (m + f64::from(step))).sqrt();
                    let expected = get(t.rank, t.component + step)
                        .map_or_else(|| CMatrix::zeros(f.dim(), f.dim()), |n| &n.matrix * Complex64::from(c));
                    let defect = commutator(ladder, &t.matrix) - expected;
                    assert!(max_abs(&defect) < 1e-12, "f={f} f'={fp} rank {j} m={m} step {step}");
                }
            }
        }
    }
}

#[test]
fn spin_half_tensor_part_vanishes() {
    for i in [h(0), h(2)] {
        let tr = Transition::d2(i);
        for fp in tr.excited_levels() {
            for m in Rank::Tensor.components() {
                let closed = irreducible_tensor_operator(&tr, HalfInt::HALF, fp, Rank::Tensor, m).unwrap();
                assert!(max_abs(&closed.matrix) <= 1e-14);
            }
            let dyad = polarizability_dyad(&tr, HalfInt::HALF, fp).unwrap();
            for t in project_dyad_onto_rank(&dyad, Rank::Tensor) {
                assert!(max_abs(&t.matrix) <= 1e-14);
            }
        }
    }
}

#[test]
fn projected_vector_component_follows_fz() {
    let f = h(8);
    let dyad = polarizability_dyad(&cs(), f, h(10)).unwrap();
    let t10 = &project_dyad_onto_rank(&dyad, Rank::Vector)[1];
    assert_eq!(t10.component, 0);
    let fz = spin_matrices(f).unwrap().fz;
    let ratio = t10.matrix[(0, 0)] / fz[(0, 0)];
    assert!(max_abs(&(&t10.matrix - &fz * ratio)) < 1e-13);
}

#[test]
fn forbidden_pair_yields_zero_dyad() {
    let dyad = polarizability_dyad(&cs(), h(8), h(4)).unwrap();
    for q in -1..=1 {
        for qp in -1..=1 {
            assert_eq!(max_abs(dyad.component(q, qp)), 0.0);
        }
    }
}

#[test]
fn trace_of_helicity_sum_is_diagonal_and_positive() {
    let trace = polarizability_dyad(&cs(), h(8), h(10)).unwrap().helicity_trace();
    for r in 0..9 {
        for c in 0..9 {
            if r == c {
                assert!(trace[(r, c)].re > 0.0);
            } else {
                assert!(trace[(r, c)].norm() < 1e-15);
            }
        }
    }
}

/// The closed-form coefficients are specific to `j' = j + 1`; on the D1
/// line they disagree with the dyad and the residual reports it.
#[test]
fn d1_line_residual_is_reported() {
    let d1 = Transition::new(h(7), HalfInt::HALF, HalfInt::HALF).unwrap();
    let worst =
        d1.excited_levels().into_iter().map(|fp| equivalence_residual(&d1, h(8), fp).unwrap()).fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst}");
}
