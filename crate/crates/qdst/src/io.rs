//! On-disk formats for mass functions.
//!
//! A mass file is JSON with two fields: the frame's element list, and a map
//! from subset label to mass. Subset labels are comma-joined element names
//! (`"b,c"`), the empty string naming the empty set; element order inside a
//! label doesn't matter on read, and subsets with zero mass may be omitted.
//! Writing normalizes labels to lexicographic element order and drops
//! zeros, so a written file is a canonical form of the mass it holds.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dst::{Frame, MassFunction};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MassFile {
    elements: Vec<String>,
    masses: BTreeMap<String, f64>,
}

/// Parses a mass function from mass-file JSON text.
pub fn mass_from_json(text: &str) -> Result<MassFunction> {
    let file: MassFile = serde_json::from_str(text)?;
    let frame = Frame::new(file.elements)?;
    let mut values = vec![0.0; frame.num_subsets()];
    let mut seen = vec![false; frame.num_subsets()];
    for (label, value) in &file.masses {
        let index = frame.parse_subset_label(label)?;
        if seen[index] {
            return Err(Error::MassFile(format!(
                "subset `{label}` duplicates an earlier entry"
            )));
        }
        seen[index] = true;
        values[index] = *value;
    }
    MassFunction::new(frame, values)
}

/// Renders a mass function as canonical mass-file JSON (sorted labels,
/// zeros omitted, trailing newline).
pub fn mass_to_json(mass: &MassFunction) -> String {
    let frame = mass.frame();
    let masses: BTreeMap<String, f64> = mass
        .values()
        .iter()
        .enumerate()
        .filter(|(_, &value)| value != 0.0)
        .map(|(index, &value)| (frame.subset_label(index), value))
        .collect();
    let file = MassFile {
        elements: frame.elements().to_vec(),
        masses,
    };
    serde_json::to_string_pretty(&file).expect("mass files always serialize") + "\n"
}

/// Reads a mass function from a JSON file.
pub fn read_mass_file(path: impl AsRef<Path>) -> Result<MassFunction> {
    mass_from_json(&std::fs::read_to_string(path)?)
}

/// Writes a mass function as canonical JSON.
pub fn write_mass_file(path: impl AsRef<Path>, mass: &MassFunction) -> Result<()> {
    std::fs::write(path, mass_to_json(mass))?;
    Ok(())
}
