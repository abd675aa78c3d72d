use std::path::Path;

use super::keyvalue::{Document, Entry};
use super::units::{format_quantity, parse_quantity, Dimension};
use crate::angular::{triangle, HalfInt};
use crate::polarizability::Transition;
use crate::{Error, Result};

/// Name under which the shipped cesium data can be referenced.
pub const BUILTIN_CESIUM: &str = "cs133_d2";

const CESIUM_D2: &str = include_str!("../../data/cs133_d2.species");

/// Detunings closer than this to a line (rad/s) count as on resonance.
pub const RESONANCE_TOLERANCE: f64 = 1.0;

/// An excited hyperfine level and its offset from the reference line, in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcitedLevel {
    pub f: HalfInt,
    pub offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomSpecies {
    pub name: String,
    pub nuclear_spin: HalfInt,
    pub ground_j: HalfInt,
    pub excited_j: HalfInt,
    pub ground_f: HalfInt,
    /// Γ in rad/s.
    pub linewidth: f64,
    /// λ₀ in meters.
    pub wavelength: f64,
    /// Sorted by ascending `f'`.
    pub excited_levels: Vec<ExcitedLevel>,
    pub provenance: String,
}

impl AtomSpecies {
    pub fn transition(&self) -> Transition {
        Transition { nuclear_spin: self.nuclear_spin, ground_j: self.ground_j, excited_j: self.excited_j }
    }

    /// The line the probe detuning is measured from: `f' = f+1` when that
    /// level exists, otherwise the highest listed level.
    pub fn reference_level(&self) -> HalfInt {
        let target = self.ground_f + HalfInt::ONE;
        self.excited_levels
            .iter()
            .map(|l| l.f)
            .find(|&f| f == target)
            .unwrap_or_else(|| self.excited_levels.last().expect("validated species has levels").f)
    }

    /// Per-line detunings `Δ_{f,f'} = Δ − offset_{f'}`, erroring when any
    /// line is hit within [`RESONANCE_TOLERANCE`].
    pub fn line_detunings(&self, probe_detuning: f64) -> Result<Vec<(HalfInt, f64)>> {
        if !probe_detuning.is_finite() {
            return Err(Error::domain(format!("detuning {probe_detuning} is not finite")));
        }
        self.excited_levels
            .iter()
            .map(|level| {
                let delta = probe_detuning - level.offset;
                if delta.abs() < RESONANCE_TOLERANCE {
                    Err(Error::OnResonance { f_prime: level.f, detuning: probe_detuning })
                } else {
                    Ok((level.f, delta))
                }
            })
            .collect()
    }

    /// Checks the invariants that [`load_species`] enforces.
    pub fn validate(&self) -> Result<()> {
        let tr = Transition::new(self.nuclear_spin, self.ground_j, self.excited_j)?;
        if !triangle(self.ground_j, self.nuclear_spin, self.ground_f) {
            return Err(Error::validation(format!(
                "ground f={} cannot be formed from j={} and i={}",
                self.ground_f, self.ground_j, self.nuclear_spin
            )));
        }
        if !(self.linewidth > 0.0 && self.linewidth.is_finite()) {
            return Err(Error::validation("linewidth must be positive"));
        }
        if !(self.wavelength > 0.0 && self.wavelength.is_finite()) {
            return Err(Error::validation("wavelength must be positive"));
        }
        if self.excited_levels.is_empty() {
            return Err(Error::validation("no excited levels listed"));
        }
        let allowed = tr.excited_levels();
        for level in &self.excited_levels {
            if !allowed.contains(&level.f) {
                return Err(Error::validation(format!(
                    "f'={} outside [{}, {}] allowed by j'={} and i={}",
                    level.f,
                    allowed[0],
                    allowed[allowed.len() - 1],
                    self.excited_j,
                    self.nuclear_spin
                )));
            }
            if !level.offset.is_finite() {
                return Err(Error::validation(format!("offset of f'={} is not finite", level.f)));
            }
        }
        for pair in self.excited_levels.windows(2) {
            if pair[0].f.twice() >= pair[1].f.twice() {
                return Err(Error::validation("excited levels must be listed once each in ascending f'"));
            }
        }
        let steps: Vec<f64> = self.excited_levels.windows(2).map(|p| p[1].offset - p[0].offset).collect();
        if !(steps.iter().all(|&s| s > 0.0) || steps.iter().all(|&s| s < 0.0)) {
            return Err(Error::validation("excited level offsets are not strictly ordered in f'"));
        }
        let reference = self.reference_level();
        let offset = self.excited_levels.iter().find(|l| l.f == reference).unwrap().offset;
        if offset != 0.0 {
            return Err(Error::validation(format!(
                "reference level f'={reference} must have offset 0, found {offset}"
            )));
        }
        Ok(())
    }

    /// Writes the species in the same format [`parse_species`] reads.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        out.push_str("[species]\n");
        out.push_str(&format!("name = {}\n", self.name));
        out.push_str(&format!("nuclear_spin = {}\n", self.nuclear_spin));
        out.push_str(&format!("ground_j = {}\n", self.ground_j));
        out.push_str(&format!("excited_j = {}\n", self.excited_j));
        out.push_str(&format!("ground_f = {}\n", self.ground_f));
        out.push_str(&format!("linewidth = {}\n", format_quantity(self.linewidth, Dimension::Frequency)));
        out.push_str(&format!("wavelength = {}\n", format_quantity(self.wavelength, Dimension::Length)));
        out.push_str(&format!("provenance = {}\n", self.provenance));
        out.push_str("\n[levels]\n");
        for level in &self.excited_levels {
            out.push_str(&format!("{} = {}\n", level.f, format_quantity(level.offset, Dimension::Frequency)));
        }
        out
    }
}

/// The shipped cesium D2 data set.
pub fn cesium_d2() -> AtomSpecies {
    parse_species(CESIUM_D2, BUILTIN_CESIUM).expect("shipped species file is valid")
}

pub fn load_species(path: impl AsRef<Path>) -> Result<AtomSpecies> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_species(&text, &path.display().to_string())
}

/// Parses species text; `source` labels error messages.
pub fn parse_species(text: &str, source: &str) -> Result<AtomSpecies> {
    let doc = Document::parse(text, source)?;
    doc.check_schema(&[
        ("", &[]),
        (
            "species",
            &["name", "nuclear_spin", "ground_j", "excited_j", "ground_f", "linewidth", "wavelength", "provenance"],
        ),
        ("levels", &[]),
    ])?;
    if let Some(stray) = doc.section("").and_then(|s| s.entries.first()) {
        return Err(doc.error(stray.line, format!("key {:?} outside any section", stray.key)));
    }
    let sp = doc.require_section("species")?;
    let spin = |key: &str| -> Result<HalfInt> {
        let e = sp.require(&doc, key)?;
        let v: HalfInt = e.value.parse().map_err(|m: Error| doc.error(e.line, m.to_string()))?;
        if v.twice() < 0 {
            return Err(doc.error(e.line, format!("{key} must be non-negative")));
        }
        Ok(v)
    };
    let quantity =
        |entry: &Entry, dim: Dimension| parse_quantity(&entry.value, dim).map_err(|m| doc.error(entry.line, m));

    let name = sp.require(&doc, "name")?.value.clone();
    let nuclear_spin = spin("nuclear_spin")?;
    let ground_j = spin("ground_j")?;
    let excited_j = spin("excited_j")?;
    let ground_f = spin("ground_f")?;
    let linewidth = quantity(sp.require(&doc, "linewidth")?, Dimension::Frequency)?;
    let wavelength = quantity(sp.require(&doc, "wavelength")?, Dimension::Length)?;
    let provenance = sp.require(&doc, "provenance")?.value.clone();
    if provenance.is_empty() {
        return Err(doc.error(sp.line, "provenance must cite the source of the data"));
    }

    let levels = doc.require_section("levels")?;
    let mut excited_levels = Vec::with_capacity(levels.entries.len());
    for entry in &levels.entries {
        let f: HalfInt = entry.key.parse().map_err(|m: Error| doc.error(entry.line, m.to_string()))?;
        let offset = quantity(entry, Dimension::Frequency)?;
        excited_levels.push(ExcitedLevel { f, offset });
    }
    excited_levels.sort_by_key(|l| l.f.twice());
    let species = AtomSpecies {
        name,
        nuclear_spin,
        ground_j,
        excited_j,
        ground_f,
        linewidth,
        wavelength,
        excited_levels,
        provenance,
    };
    species.validate().map_err(|e| match e {
        Error::Validation(m) | Error::Domain(m) => doc.error(levels.line.max(sp.line), m),
        other => other,
    })?;
    Ok(species)
}
