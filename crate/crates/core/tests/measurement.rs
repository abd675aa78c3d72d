use std::f64::consts::TAU;

use polariscope::angular::SpinOrientation;
use polariscope::atomdata::cesium_d2;
use polariscope::measurement::{
    closed_form_variance, ensemble_mse, filter_estimate, measurement_strength, simulate_photocurrent,
    snr_squared_from_od, snr_squeezing, squeezing_parameter, NoiseMode, PhotocurrentSimulation, ProbeParams,
};
use polariscope::semiclassical::CloudParams;

// P = 10 µW, r = 4 mm, Δ = 2π·1 GHz, cesium D2 (independent evaluation).
const S_1GHZ: f64 = 2.871_488_396_741_101_6e-34;
const TAU_S_1GHZ: f64 = 56.008_994_376_096_986;
const M_1GHZ: f64 = 6.160_513_521_430_255e-11;

fn setup() -> (polariscope::atomdata::AtomSpecies, CloudParams, ProbeParams) {
    let cs = cesium_d2();
    let cloud = CloudParams::new(1e9, 4e-3, None, cs.wavelength).unwrap();
    let probe = ProbeParams::new(10e-6, cs.wavelength, TAU * 1e9, 1.0, 0.0).unwrap();
    (cs, cloud, probe)
}

#[test]
fn measurement_chain_fixtures() {
    let (cs, cloud, probe) = setup();
    let m = measurement_strength(&cs, &cloud, &probe).unwrap();
    assert!((m.scattering_strength - S_1GHZ).abs() < 1e-10 * S_1GHZ);
    assert!((1.0 / m.scat_rate - TAU_S_1GHZ).abs() < 1e-10 * TAU_S_1GHZ);
    assert!((m.meas_strength - M_1GHZ).abs() < 1e-10 * M_1GHZ);
    assert!((m.shot_noise - 2.0 * probe.photon_energy() * 10e-6).abs() < 1e-30);
}

#[test]
fn zero_power_gives_zero_strength() {
    let (cs, cloud, probe) = setup();
    let dark = ProbeParams::new(0.0, cs.wavelength, probe.detuning(), 1.0, 0.0).unwrap();
    let m = measurement_strength(&cs, &cloud, &dark).unwrap();
    assert_eq!((m.scattering_strength, m.meas_strength, m.scat_rate), (0.0, 0.0, 0.0));
}

#[test]
fn photocurrent_statistics() {
    let (m, fz, eta, dt) = (4.0, 1.5, 0.8, 1e-6);
    let rec = PhotocurrentSimulation::new(m, fz, eta, dt, 1.0, 11).run().unwrap();
    let n = rec.samples.len() as f64;
    assert_eq!(rec.samples.len(), 1_000_000);
    let mean = rec.samples.iter().sum::<f64>() / n;
    let expected = eta * m.sqrt() * fz;
    let sigma = (eta / dt / n).sqrt();
    assert!((mean - expected).abs() < 4.0 * sigma, "{mean} vs {expected}");
    let var_dt = rec.samples.iter().map(|y| ((y - mean) * dt).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((var_dt / (eta * dt) - 1.0).abs() < 0.01, "{var_dt}");
}

#[test]
fn suppressed_noise_gives_the_mean_signal() {
    let sim = PhotocurrentSimulation {
        noise: NoiseMode::Suppressed,
        ..PhotocurrentSimulation::new(2.0, -0.5, 0.5, 1e-3, 0.1, 1)
    };
    let rec = sim.run().unwrap();
    let expected = 0.5 * 2f64.sqrt() * -0.5;
    assert!(rec.samples.iter().all(|&y| (y - expected).abs() < 1e-15));
}

#[test]
fn photocurrent_is_deterministic_per_seed() {
    let (cs, cloud, probe) = setup();
    let m = measurement_strength(&cs, &cloud, &probe).unwrap();
    let a = simulate_photocurrent(&m, 3.0, 0.9, 1e-6, 1e-3, 42).unwrap();
    let b = simulate_photocurrent(&m, 3.0, 0.9, 1e-6, 1e-3, 42).unwrap();
    let c = simulate_photocurrent(&m, 3.0, 0.9, 1e-6, 1e-3, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.samples, c.samples);
}

#[test]
fn duration_must_be_a_whole_number_of_steps() {
    assert!(PhotocurrentSimulation::new(1.0, 0.0, 1.0, 3e-4, 1e-3, 1).run().is_err());
    assert!(PhotocurrentSimulation::new(1.0, 0.0, 1.0, 0.0, 1e-3, 1).run().is_err());
}

#[test]
fn filter_variance_matches_closed_form_under_partitions() {
    let (m, eta, v0, tau) = (3.0, 0.7, 2.0, 0.4);
    for steps in [1usize, 7, 400, 10_000] {
        let dt = tau / steps as f64;
        let sim = PhotocurrentSimulation::new(m, 0.3, eta, dt, tau, 5);
        let states = filter_estimate(&sim.run().unwrap(), v0, m, eta).unwrap();
        let last = states.last().unwrap();
        let closed = closed_form_variance(v0, eta, m, tau);
        assert!((last.variance - closed).abs() <= 1e-12 * closed, "{steps} steps");
        for s in &states {
            let v = closed_form_variance(v0, eta, m, s.elapsed);
            assert!((s.variance - v).abs() <= 1e-12 * v);
        }
    }
}

#[test]
fn filter_undoes_the_gain() {
    let sim = PhotocurrentSimulation::new(2.0, 0.4, 1.0, 1e-3, 0.2, 9);
    let plain = sim.run().unwrap();
    let amplified = PhotocurrentSimulation { gain: 1e3, ..sim }.run().unwrap();
    let a = filter_estimate(&plain, 1.0, 2.0, 1.0).unwrap();
    let b = filter_estimate(&amplified, 1.0, 2.0, 1.0).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.estimate - y.estimate).abs() < 1e-12 * (1.0 + x.estimate.abs()));
    }
}

#[test]
fn ensemble_mse_matches_predicted_variance() {
    let (m, eta, v0) = (50.0, 0.9, 4.0);
    let s = ensemble_mse(m, eta, v0, 1e-4, 0.1, 2024, 500).unwrap();
    assert!((s.mse / s.predicted_variance - 1.0).abs() < 0.15, "{s:?}");
    assert!(s.mean_error.abs() < 4.0 * (s.predicted_variance / 500.0).sqrt());
}

#[test]
fn ensemble_mse_shrinks_with_probe_time() {
    let (m, eta, v0) = (50.0, 0.9, 4.0);
    let mse: Vec<f64> =
        [0.01, 0.1, 1.0].iter().map(|&tau| ensemble_mse(m, eta, v0, 1e-3, tau, 8, 500).unwrap().mse).collect();
    assert!(mse[0] > mse[1] && mse[1] > mse[2], "{mse:?}");
}

#[test]
fn ensemble_is_independent_of_thread_count() {
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| ensemble_mse(10.0, 1.0, 1.0, 1e-3, 0.05, 77, 64).unwrap())
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn squeezing_examples() {
    assert_eq!(squeezing_parameter(0.0), 1.0);
    assert_eq!(snr_squared_from_od(0.0, 7.0, 4.0, 0.05), 0.0);
    let snr2 = snr_squared_from_od(1.0, 7.0, 4.0, 0.05);
    assert!((snr2 - 0.35).abs() < 1e-15);
    assert!((squeezing_parameter(snr2) - 1.0 / 1.35).abs() < 1e-15);
}

#[test]
fn squeezing_improves_with_probe_time() {
    let (cs, cloud, probe) = setup();
    let x = SpinOrientation::along_x();
    let w: Vec<f64> =
        [0.0, 1e-3, 1e-2, 1e-1, 1.0].iter().map(|&tau| snr_squeezing(&cs, &cloud, &probe, x, tau).unwrap().w).collect();
    assert_eq!(w[0], 1.0);
    assert!(w.windows(2).all(|p| p[1] < p[0]), "{w:?}");
    let blind = probe.with_efficiency(0.0).unwrap();
    assert_eq!(snr_squeezing(&cs, &cloud, &blind, x, 1.0).unwrap().w, 1.0);
    let late = snr_squeezing(&cs, &cloud, &probe, x, 10.0).unwrap();
    assert!(late.beyond_validity);
    assert!(snr_squeezing(&cs, &cloud, &probe, x, -1.0).is_err());
}
