use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::photocurrent::{PhotocurrentRecord, PhotocurrentSimulation};
use crate::{Error, Result};

/// Posterior of `F_z` after `elapsed` seconds of record.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FilterState {
    pub estimate: f64,
    pub variance: f64,
    pub elapsed: f64,
}

/// `v(τ) = v₀ / (1 + η v₀ M τ)`.
pub fn closed_form_variance(prior_var: f64, efficiency: f64, meas_strength: f64, tau: f64) -> f64 {
    prior_var / (1.0 + efficiency * prior_var * meas_strength * tau)
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        self.carry += if self.sum.abs() >= x.abs() { (self.sum - t) + x } else { (x - t) + self.sum };
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Recursive least-squares fit of a constant `F_z` to the record, starting
/// from a zero-mean prior of variance `prior_var`.
///
/// Returns the prior followed by the state after each sample. The precision
/// grows by `ηM dt` per step and the information by `√M y dt / gain`, so the
/// estimate is the variance-weighted fit of the record prefix.
pub fn filter_estimate(
    record: &PhotocurrentRecord,
    prior_var: f64,
    meas_strength: f64,
    efficiency: f64,
) -> Result<Vec<FilterState>> {
    if !(prior_var.is_finite() && prior_var > 0.0) {
        return Err(Error::validation(format!("prior variance must be positive, got {prior_var}")));
    }
    if !(0.0..=1.0).contains(&efficiency) {
        return Err(Error::validation(format!("detection efficiency must lie in [0, 1], got {efficiency}")));
    }
    let root_m = meas_strength.sqrt();
    let rate = efficiency * meas_strength;
    let mut precision = CompensatedSum::default();
    precision.add(1.0 / prior_var);
    let mut information = CompensatedSum::default();
    let mut states = Vec::with_capacity(record.samples.len() + 1);
    states.push(FilterState { estimate: 0.0, variance: prior_var, elapsed: 0.0 });
    for (k, &y) in record.samples.iter().enumerate() {
        precision.add(rate * record.dt);
        information.add(root_m * y / record.gain * record.dt);
        let p = precision.value();
        states.push(FilterState {
            estimate: information.value() / p,
            variance: 1.0 / p,
            elapsed: (k + 1) as f64 * record.dt,
        });
    }
    Ok(states)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleSummary {
    pub trials: usize,
    /// Mean of `(x̂(τ) − F_z)²` over trials.
    pub mse: f64,
    /// Mean of `x̂(τ) − F_z`.
    pub mean_error: f64,
    /// `v(τ)` from the closed form.
    pub predicted_variance: f64,
}

/// Monte Carlo check of the filter: each trial draws `F_z` from the prior
/// and its noise from stream `k` of `seed`, so the result does not depend on
/// how trials are scheduled across threads.
pub fn ensemble_mse(
    meas_strength: f64,
    efficiency: f64,
    prior_var: f64,
    dt: f64,
    duration: f64,
    seed: u64,
    trials: usize,
) -> Result<EnsembleSummary> {
    if trials == 0 {
        return Err(Error::validation("at least one trial is required"));
    }
    if !(prior_var.is_finite() && prior_var > 0.0) {
        return Err(Error::validation(format!("prior variance must be positive, got {prior_var}")));
    }
    let errors: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = PhotocurrentSimulation::rng(seed, k);
            let z: f64 = StandardNormal.sample(&mut rng);
            let fz = prior_var.sqrt() * z;
            let sim = PhotocurrentSimulation {
                stream: k,
                ..PhotocurrentSimulation::new(meas_strength, fz, efficiency, dt, duration, seed)
            };
            let record = sim.run_with(&mut rng)?;
            let last = *filter_estimate(&record, prior_var, meas_strength, efficiency)?.last().unwrap();
            Ok(last.estimate - fz)
        })
        .collect::<Result<_>>()?;
    let n = trials as f64;
    let steps = (duration / dt).round();
    Ok(EnsembleSummary {
        trials,
        mse: errors.iter().map(|e| e * e).sum::<f64>() / n,
        mean_error: errors.iter().sum::<f64>() / n,
        predicted_variance: closed_form_variance(prior_var, efficiency, meas_strength, steps * dt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::NoiseMode;

    #[test]
    fn prior_state_first() {
        let rec = PhotocurrentSimulation::new(2.0, 1.0, 1.0, 1e-3, 1e-2, 3).run().unwrap();
        let states = filter_estimate(&rec, 5.0, 2.0, 1.0).unwrap();
        assert_eq!(states.len(), 11);
        assert_eq!(states[0], FilterState { estimate: 0.0, variance: 5.0, elapsed: 0.0 });
        assert!(states.windows(2).all(|w| w[1].variance <= w[0].variance));
    }

    #[test]
    fn variance_halves() {
        let (v0, m, eta) = (2.0, 5.0, 0.5);
        let tau = 1.0 / (eta * v0 * m);
        assert!((closed_form_variance(v0, eta, m, tau) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_efficiency_learns_nothing() {
        let rec = PhotocurrentSimulation::new(2.0, 1.0, 0.0, 1e-3, 1e-2, 3).run().unwrap();
        let states = filter_estimate(&rec, 5.0, 2.0, 0.0).unwrap();
        assert!(states.iter().all(|s| s.estimate == 0.0 && s.variance == 5.0));
    }

    #[test]
    fn noiseless_estimate_approaches_truth() {
        let mut sim = PhotocurrentSimulation::new(100.0, 2.0, 1.0, 1e-3, 1.0, 0);
        sim.noise = NoiseMode::Suppressed;
        sim.gain = 3.0;
        let rec = sim.run().unwrap();
        let last = *filter_estimate(&rec, 1e6, 100.0, 1.0).unwrap().last().unwrap();
        assert!((last.estimate - 2.0).abs() < 1e-4);
    }

    #[test]
    fn rejects_bad_prior() {
        let rec = PhotocurrentSimulation::new(1.0, 0.0, 1.0, 1e-3, 1e-2, 0).run().unwrap();
        assert!(filter_estimate(&rec, 0.0, 1.0, 1.0).is_err());
    }
}
