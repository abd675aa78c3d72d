use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::MeasurementParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoiseMode {
    #[default]
    Gaussian,
    /// Zero-variance increments, for checking the signal path.
    Suppressed,
}

/// Sampled photocurrent `y_k`, one value per step of length `dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhotocurrentRecord {
    pub dt: f64,
    pub seed: u64,
    pub stream: u64,
    pub gain: f64,
    pub samples: Vec<f64>,
    /// The `F_z` value (units of ħ) that generated the record.
    pub fz_true: f64,
}

impl PhotocurrentRecord {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 * self.dt
    }

    /// End time of each sample.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.samples.len()).map(move |k| k as f64 * self.dt)
    }
}

/// Euler–Maruyama generation of `y dt = gain·(η√M F_z dt + √η dW)`.
///
/// Draws come from a ChaCha8 generator seeded with `seed` on stream
/// `stream`, so records are reproducible and independent across streams.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotocurrentSimulation {
    pub meas_strength: f64,
    pub fz_true: f64,
    pub efficiency: f64,
    pub gain: f64,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub stream: u64,
    pub noise: NoiseMode,
}

impl PhotocurrentSimulation {
    pub fn new(meas_strength: f64, fz_true: f64, efficiency: f64, dt: f64, duration: f64, seed: u64) -> Self {
        PhotocurrentSimulation {
            meas_strength,
            fz_true,
            efficiency,
            gain: 1.0,
            dt,
            duration,
            seed,
            stream: 0,
            noise: NoiseMode::Gaussian,
        }
    }

    /// Number of steps; `duration` must be a whole multiple of `dt` to
    /// within a relative `1e-9`.
    pub fn steps(&self) -> Result<usize> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::validation(format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.duration.is_finite() && self.duration >= self.dt) {
            return Err(Error::validation(format!(
                "duration {} must be at least one time step {}",
                self.duration, self.dt
            )));
        }
        let n = (self.duration / self.dt).round();
        if (n * self.dt - self.duration).abs() > 1e-9 * self.duration {
            return Err(Error::validation(format!(
                "duration {} is not a whole number of {} s steps",
                self.duration, self.dt
            )));
        }
        Ok(n as usize)
    }

    fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(Error::validation(format!("detection efficiency must lie in [0, 1], got {}", self.efficiency)));
        }
        if !(self.meas_strength.is_finite() && self.meas_strength >= 0.0) {
            return Err(Error::validation("measurement strength must be non-negative"));
        }
        if !(self.gain.is_finite() && self.gain != 0.0) {
            return Err(Error::validation("gain must be finite and nonzero"));
        }
        if !self.fz_true.is_finite() {
            return Err(Error::validation("F_z must be finite"));
        }
        Ok(())
    }

    pub(crate) fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        rng
    }

    pub fn run(&self) -> Result<PhotocurrentRecord> {
        self.run_with(&mut Self::rng(self.seed, self.stream))
    }

    pub(crate) fn run_with(&self, rng: &mut ChaCha8Rng) -> Result<PhotocurrentRecord> {
        self.check()?;
        let n = self.steps()?;
        let signal = self.efficiency * self.meas_strength.sqrt() * self.fz_true;
        let noise_scale = (self.efficiency / self.dt).sqrt();
        let samples = (0..n)
            .map(|_| {
                let z: f64 = match self.noise {
                    NoiseMode::Gaussian => StandardNormal.sample(rng),
                    NoiseMode::Suppressed => 0.0,
                };
                self.gain * (signal + noise_scale * z)
            })
            .collect();
        Ok(PhotocurrentRecord {
            dt: self.dt,
            seed: self.seed,
            stream: self.stream,
            gain: self.gain,
            samples,
            fz_true: self.fz_true,
        })
    }
}

/// Gaussian-noise record with unit gain on stream 0.
pub fn simulate_photocurrent(
    m_params: &MeasurementParams,
    fz_true: f64,
    efficiency: f64,
    dt: f64,
    duration: f64,
    seed: u64,
) -> Result<PhotocurrentRecord> {
    PhotocurrentSimulation::new(m_params.meas_strength, fz_true, efficiency, dt, duration, seed).run()
}
