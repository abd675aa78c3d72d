use std::f64::consts::{PI, TAU};

use polariscope::atomdata::cesium_d2;
use polariscope::measurement::{
    closed_form_variance, coherent_prior_variance, filter_estimate, measurement_strength, snr_squared_from_od,
    PhotocurrentSimulation, ProbeParams,
};
use polariscope::semiclassical::{rotate_stokes_exact, rotate_stokes_small, CloudParams, GammaVector, StokesVector};
use proptest::prelude::*;

fn stokes() -> impl Strategy<Value = StokesVector> {
    (0.1..10.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(s0, a, b, c)| StokesVector::new(s0, a, b, c))
}

fn gamma(max: f64) -> impl Strategy<Value = GammaVector> {
    (-max..max, -max..max, -max..max).prop_map(|(x, y, z)| GammaVector::new(x, y, z))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn exact_rotation_preserves_the_norm(s in stokes(), g in gamma(10.0)) {
        let out = rotate_stokes_exact(s, g);
        prop_assert_eq!(out.s0, s.s0);
        prop_assert!((out.polarization_norm() - s.polarization_norm()).abs() <= 1e-12 * (1.0 + s.polarization_norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn rotations_about_one_axis_compose(s in stokes(), g in gamma(2.0)) {
        let twice = rotate_stokes_exact(rotate_stokes_exact(s, g), g);
        let once = rotate_stokes_exact(s, g.scaled(2.0));
        for (a, b) in [(twice.sx, once.sx), (twice.sy, once.sy), (twice.sz, once.sz)] {
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + s.polarization_norm()));
        }
    }

    #[test]
    fn small_angle_error_is_cubic(s in stokes(), g in gamma(0.1 / 3f64.sqrt())) {
        let exact = rotate_stokes_exact(s, g);
        let small = rotate_stokes_small(s, g).stokes;
        let bound = 2.0 * g.norm().powi(3) * s.polarization_norm();
        for (a, b) in [(exact.sx, small.sx), (exact.sy, small.sy), (exact.sz, small.sz)] {
            prop_assert!((a - b).abs() <= bound + 1e-16);
        }
    }

    #[test]
    fn filter_is_partition_invariant(
        m in 0.1..100.0f64,
        eta in 0.0..1.0f64,
        v0 in 0.1..10.0f64,
        tau in 1e-3..1.0f64,
        steps in 1usize..2_000,
    ) {
        let rec = PhotocurrentSimulation::new(m, 0.0, eta, tau / steps as f64, tau, 1).run().unwrap();
        let last = *filter_estimate(&rec, v0, m, eta).unwrap().last().unwrap();
        prop_assert!(rel_close(last.variance, closed_form_variance(v0, eta, m, tau), 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn measurement_routes_agree(
        n in 1e6..1e11f64,
        r in 1e-4..1e-2f64,
        power in 1e-7..1e-3f64,
        detuning_hz in 0.2e9..50e9f64,
        sign in prop::bool::ANY,
        eta in 0.01..1.0f64,
        tau in 1e-6..1e-2f64,
    ) {
        let cs = cesium_d2();
        let cloud = CloudParams::new(n, r, None, cs.wavelength).unwrap();
        let detuning = if sign { TAU * detuning_hz } else { -TAU * (detuning_hz + 1e9) };
        let probe = ProbeParams::new(power, cs.wavelength, detuning, eta, 0.0).unwrap();
        let m = measurement_strength(&cs, &cloud, &probe).unwrap();
        let via_rate = 0.5 * m.scat_rate * cloud.sigma0() / (PI * r * r);
        prop_assert!(rel_close(m.scattering_strength / m.shot_noise, via_rate, 1e-12));

        let f = cs.ground_f.value();
        let snr2 = eta * coherent_prior_variance(n, f) * m.meas_strength * tau;
        let via_od = snr_squared_from_od(eta, cloud.od(), f, tau * m.scat_rate);
        prop_assert!(rel_close(snr2, via_od, 1e-12));
    }
}
