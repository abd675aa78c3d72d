use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use super::keyvalue::{Document, Entry, Section};
use super::species::{cesium_d2, load_species, AtomSpecies, BUILTIN_CESIUM};
use super::units::{format_quantity, parse_number, parse_quantity, Dimension};
use crate::angular::SpinOrientation;
use crate::measurement::{coherent_prior_variance, ProbeParams};
use crate::semiclassical::CloudParams;
use crate::{Error, Result};

/// Time-stepping and sampling settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationParams {
    /// Photocurrent step in s.
    pub dt: f64,
    /// Photocurrent record length in s.
    pub duration: f64,
    pub seed: u64,
    /// Monte Carlo ensemble size.
    pub trials: usize,
    /// Points per trajectory path.
    pub samples: usize,
    /// Prior variance of `F_z` (ħ²); the coherent-state value when unset.
    pub prior_variance: Option<f64>,
    /// `F_z` (ħ) used for single photocurrent runs.
    pub fz: Option<f64>,
}

impl Default for SimulationParams {
    fn default() -> Self {
        SimulationParams {
            dt: 1e-6,
            duration: 1e-3,
            seed: 1,
            trials: 500,
            samples: 181,
            prior_variance: None,
            fz: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    /// How the species was referenced: a builtin name or a path.
    pub species_ref: String,
    pub species: AtomSpecies,
    pub cloud: CloudParams,
    pub orientation: SpinOrientation,
    pub probe: ProbeParams,
    pub simulation: SimulationParams,
}

impl ExperimentConfig {
    /// Reference settings: 10⁹ atoms in a 4 mm cloud, 10 µW probe 150 MHz
    /// blue of the reference line, spins along x.
    pub fn reference() -> Self {
        let species = cesium_d2();
        let cloud = CloudParams::new(1e9, 4e-3, None, species.wavelength).expect("valid reference cloud");
        let probe = ProbeParams::new(10e-6, species.wavelength, std::f64::consts::TAU * 150e6, 1.0, 0.0)
            .expect("valid reference probe");
        ExperimentConfig {
            species_ref: BUILTIN_CESIUM.to_string(),
            species,
            cloud,
            orientation: SpinOrientation::along_x(),
            probe,
            simulation: SimulationParams::default(),
        }
    }

    pub fn prior_variance(&self) -> f64 {
        self.simulation
            .prior_variance
            .unwrap_or_else(|| coherent_prior_variance(self.cloud.n_atoms(), self.species.ground_f.value()))
    }

    /// `F_z` for single photocurrent runs: one prior standard deviation
    /// unless set.
    pub fn fz_true(&self) -> f64 {
        self.simulation.fz.unwrap_or_else(|| self.prior_variance().sqrt())
    }

    /// Writes SI values in a form that [`parse_experiment`] reads back
    /// bit-exactly.
    pub fn to_config_string(&self) -> String {
        let q = format_quantity;
        let sim = &self.simulation;
        let mut out = format!("species = {}\n\n[cloud]\n", self.species_ref);
        out.push_str(&format!("atoms = {:e}\n", self.cloud.n_atoms()));
        out.push_str(&format!("radius = {}\n", q(self.cloud.radius(), Dimension::Length)));
        out.push_str(&format!("length = {}\n", q(self.cloud.length(), Dimension::Length)));
        out.push_str(&format!("spin_theta = {}\n", q(self.orientation.theta(), Dimension::Angle)));
        out.push_str(&format!("spin_phi = {}\n", q(self.orientation.phi(), Dimension::Angle)));
        out.push_str("\n[probe]\n");
        out.push_str(&format!("power = {}\n", q(self.probe.power(), Dimension::Power)));
        out.push_str(&format!("detuning = {}\n", q(self.probe.detuning(), Dimension::Frequency)));
        out.push_str(&format!("efficiency = {:e}\n", self.probe.efficiency()));
        out.push_str(&format!("polarization_angle = {}\n", q(self.probe.pol_angle(), Dimension::Angle)));
        out.push_str(&format!("gain = {:e}\n", self.probe.gain()));
        out.push_str("\n[simulation]\n");
        out.push_str(&format!("dt = {}\n", q(sim.dt, Dimension::Time)));
        out.push_str(&format!("duration = {}\n", q(sim.duration, Dimension::Time)));
        out.push_str(&format!("seed = {}\n", sim.seed));
        out.push_str(&format!("trials = {}\n", sim.trials));
        out.push_str(&format!("samples = {}\n", sim.samples));
        if let Some(v) = sim.prior_variance {
            out.push_str(&format!("prior_variance = {v:e}\n"));
        }
        if let Some(v) = sim.fz {
            out.push_str(&format!("fz = {v:e}\n"));
        }
        out
    }
}

pub fn load_experiment(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_experiment(&text, &path.display().to_string(), path.parent())
}

/// Parses experiment text. A species path is resolved against `base_dir`.
pub fn parse_experiment(text: &str, source: &str, base_dir: Option<&Path>) -> Result<ExperimentConfig> {
    let doc = Document::parse(text, source)?;
    doc.check_schema(&[
        ("", &["species"]),
        ("cloud", &["atoms", "radius", "length", "spin_theta", "spin_phi"]),
        ("probe", &["power", "detuning", "efficiency", "polarization_angle", "gain"]),
        ("simulation", &["dt", "duration", "seed", "trials", "samples", "prior_variance", "fz"]),
    ])?;
    let reader = Reader { doc: &doc };

    let species_ref =
        doc.section("").and_then(|s| s.get("species")).map_or_else(|| BUILTIN_CESIUM.to_string(), |e| e.value.clone());
    let species = if species_ref == BUILTIN_CESIUM {
        cesium_d2()
    } else {
        let mut path = PathBuf::from(&species_ref);
        if path.is_relative() {
            if let Some(dir) = base_dir {
                path = dir.join(path);
            }
        }
        load_species(path)?
    };

    let cloud_sec = doc.require_section("cloud")?;
    let atoms = reader.number(cloud_sec.require(&doc, "atoms")?)?;
    let radius = reader.quantity(cloud_sec.require(&doc, "radius")?, Dimension::Length)?;
    let length = reader.optional_quantity(cloud_sec, "length", Dimension::Length)?;
    let cloud = CloudParams::new(atoms, radius, length, species.wavelength)
        .map_err(|e| doc.error(cloud_sec.line, e.to_string()))?;
    let theta = reader.optional_quantity(cloud_sec, "spin_theta", Dimension::Angle)?.unwrap_or(FRAC_PI_2);
    let phi = reader.optional_quantity(cloud_sec, "spin_phi", Dimension::Angle)?.unwrap_or(0.0);
    let orientation = SpinOrientation::new(theta, phi).map_err(|e| doc.error(cloud_sec.line, e.to_string()))?;

    let probe_sec = doc.require_section("probe")?;
    let power = reader.quantity(probe_sec.require(&doc, "power")?, Dimension::Power)?;
    let detuning_entry = probe_sec.require(&doc, "detuning")?;
    let detuning = reader.quantity(detuning_entry, Dimension::Frequency)?;
    let efficiency = reader.optional_number(probe_sec, "efficiency")?.unwrap_or(1.0);
    let pol_angle = reader.optional_quantity(probe_sec, "polarization_angle", Dimension::Angle)?.unwrap_or(0.0);
    let gain = reader.optional_number(probe_sec, "gain")?.unwrap_or(1.0);
    if power <= 0.0 {
        return Err(doc.error(probe_sec.require(&doc, "power")?.line, "probe power must be positive"));
    }
    let probe = ProbeParams::new(power, species.wavelength, detuning, efficiency, pol_angle)
        .and_then(|p| p.with_gain(gain))
        .map_err(|e| doc.error(probe_sec.line, e.to_string()))?;
    species.line_detunings(detuning).map_err(|e| doc.error(detuning_entry.line, e.to_string()))?;

    let mut simulation = SimulationParams::default();
    if let Some(sim) = doc.section("simulation") {
        if let Some(v) = reader.optional_quantity(sim, "dt", Dimension::Time)? {
            simulation.dt = v;
        }
        if let Some(v) = reader.optional_quantity(sim, "duration", Dimension::Time)? {
            simulation.duration = v;
        }
        if let Some(e) = sim.get("seed") {
            simulation.seed = reader.integer(e)?;
        }
        if let Some(e) = sim.get("trials") {
            simulation.trials = reader.count(e)?;
        }
        if let Some(e) = sim.get("samples") {
            simulation.samples = reader.count(e)?;
        }
        simulation.prior_variance = reader.optional_number(sim, "prior_variance")?;
        simulation.fz = reader.optional_number(sim, "fz")?;
        if simulation.dt <= 0.0 || simulation.duration < simulation.dt {
            return Err(doc.error(sim.line, "need dt > 0 and duration ≥ dt"));
        }
        if simulation.prior_variance.is_some_and(|v| v <= 0.0) {
            return Err(doc.error(sim.get("prior_variance").unwrap().line, "prior variance must be positive"));
        }
    }

    Ok(ExperimentConfig { species_ref, species, cloud, orientation, probe, simulation })
}

struct Reader<'a> {
    doc: &'a Document,
}

impl Reader<'_> {
    fn quantity(&self, entry: &Entry, dim: Dimension) -> Result<f64> {
        parse_quantity(&entry.value, dim).map_err(|m| self.doc.error(entry.line, format!("{}: {m}", entry.key)))
    }

    fn optional_quantity(&self, section: &Section, key: &str, dim: Dimension) -> Result<Option<f64>> {
        section.get(key).map(|e| self.quantity(e, dim)).transpose()
    }

    fn number(&self, entry: &Entry) -> Result<f64> {
        parse_number(&entry.value).map_err(|m| self.doc.error(entry.line, format!("{}: {m}", entry.key)))
    }

    fn optional_number(&self, section: &Section, key: &str) -> Result<Option<f64>> {
        section.get(key).map(|e| self.number(e)).transpose()
    }

    fn integer(&self, entry: &Entry) -> Result<u64> {
        entry
            .value
            .parse()
            .map_err(|_| self.doc.error(entry.line, format!("{}: expected a non-negative integer", entry.key)))
    }

    fn count(&self, entry: &Entry) -> Result<usize> {
        let n = self.integer(entry)?;
        if n == 0 {
            return Err(self.doc.error(entry.line, format!("{} must be at least 1", entry.key)));
        }
        Ok(n as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    const REFERENCE: &str = "\
species = cs133_d2

[cloud]
atoms = 1e9
radius = 4 mm

[probe]
power = 10 uW
detuning = 150 MHz
";

    #[test]
    fn reference_text() {
        let cfg = parse_experiment(REFERENCE, "ref", None).unwrap();
        assert_eq!(cfg.probe.detuning(), TAU * 1.5e8);
        assert_eq!(cfg.cloud.length(), 8e-3);
        assert_eq!(cfg, ExperimentConfig::reference());
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let mut cfg = parse_experiment(REFERENCE, "ref", None).unwrap();
        cfg.simulation.prior_variance = Some(1.0 / 3.0);
        cfg.simulation.fz = Some(-0.1);
        let again = parse_experiment(&cfg.to_config_string(), "rt", None).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(again.probe.detuning().to_bits(), cfg.probe.detuning().to_bits());
    }

    #[test]
    fn on_resonance_rejected() {
        let text = REFERENCE.replace("150 MHz", "-251.0916 MHz");
        let err = parse_experiment(&text, "ref", None).unwrap_err().to_string();
        assert!(err.starts_with("ref:9:") && err.contains("f'=4"), "{err}");
    }

    #[test]
    fn efficiency_out_of_range() {
        let text = format!("{REFERENCE}efficiency = 1.2\n");
        assert!(parse_experiment(&text, "ref", None).is_err());
    }

    #[test]
    fn bare_numbers_need_units() {
        let text = REFERENCE.replace("4 mm", "0.004");
        let err = parse_experiment(&text, "ref", None).unwrap_err().to_string();
        assert!(err.contains("needs a unit"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = format!("{REFERENCE}detunning = 3 MHz\n");
        assert!(parse_experiment(&text, "ref", None).is_err());
    }
}
