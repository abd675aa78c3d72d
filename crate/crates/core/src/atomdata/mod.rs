//! Species data and experiment configuration files.
//!
//! Both formats are sectioned `key = value` text with `#` comments.
//! Dimensioned values carry a unit suffix and are stored in SI units, with
//! frequencies as angular frequencies in rad/s.

mod experiment;
mod keyvalue;
mod species;
mod units;

pub use experiment::{load_experiment, parse_experiment, ExperimentConfig, SimulationParams};
pub use species::{
    cesium_d2, load_species, parse_species, AtomSpecies, ExcitedLevel, BUILTIN_CESIUM, RESONANCE_TOLERANCE,
};
pub use units::{format_quantity, parse_number, parse_quantity, Dimension};
