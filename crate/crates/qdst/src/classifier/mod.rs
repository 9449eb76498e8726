//! Attribute-fusion classification.
//!
//! Training fits one Gaussian mixture per (attribute, class) pair. To
//! classify a point, each attribute's mixture densities across the classes
//! are rescaled by their maximum into a possibility profile, each profile
//! becomes a mass function over the class frame by the consonant product
//! transform, and the per-attribute masses are fused conjunctively. The
//! fused mass is produced by a compiled circuit — one block of qubits per
//! attribute plus an output block, simple rotation loading, one
//! multi-controlled X per class — whose output-register distribution equals
//! the classical fusion exactly; a shot-sampling backend can observe that
//! distribution with finite statistics instead. The pignistic transform
//! turns the fused mass into class probabilities and the top class wins,
//! lowest index on ties.

mod dataset;
mod eval;
mod gmm;

pub use dataset::Dataset;
pub use eval::{
    derive_seed, evaluate, stratified_split, EvalBackend, EvalOptions, EvalReport, FractionSummary,
    RepeatResult,
};
pub use gmm::{fit_gmm, fit_gmm_traced, EmOptions, EmTrace, GaussianComponent, Gmm};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::circuit::{prepare_simple, sample, Circuit, ControlBit};
use crate::dst::{betp, conjunctive_fold, Frame, MassFunction, PossMf};
use crate::error::{Error, Result};
use crate::rule::Polarity;

/// How a fused distribution is observed when classifying.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Read the simulator's exact output distribution.
    Exact,
    /// Estimate it from `shots` seeded measurement samples.
    Shots { shots: u64, seed: u64 },
}

/// A classification outcome: the winning class plus the evidence behind it.
#[derive(Debug, Clone)]
pub struct Classification {
    /// Index of the winning class in the model's frame.
    pub class_index: usize,
    /// Its label.
    pub label: String,
    /// Pignistic probability per class.
    pub pignistic: Vec<f64>,
    /// The observed fused mass over all `2^n` class subsets, as used for
    /// the decision (exact or shot-estimated).
    pub fused: Vec<f64>,
}

/// A trained attribute-fusion classifier.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifierModel {
    #[serde(rename = "classes")]
    frame: Frame,
    attributes: Vec<String>,
    components: usize,
    /// `grid[attribute][class]` is the mixture for that attribute's values
    /// within that class.
    grid: Vec<Vec<Gmm>>,
}

impl ClassifierModel {
    /// Fits one mixture of `components` Gaussians per (attribute, class)
    /// pair. Class order (frame element order) is the dataset's
    /// lexicographic class order.
    pub fn train(data: &Dataset, components: usize) -> Result<Self> {
        let frame = Frame::new(data.classes().to_vec())?;
        let mut grid = Vec::with_capacity(data.attributes().len());
        for attribute in 0..data.attributes().len() {
            let mut row = Vec::with_capacity(frame.len());
            for class in 0..frame.len() {
                let column = data.column_for_class(attribute, class);
                row.push(fit_gmm(&column, components, EmOptions::default())?);
            }
            grid.push(row);
        }
        Ok(ClassifierModel {
            frame,
            attributes: data.attributes().to_vec(),
            components,
            grid,
        })
    }

    /// The class frame: one element per class label, lexicographic order.
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    /// Mixture size used for every (attribute, class) fit.
    pub fn components(&self) -> usize {
        self.components
    }

    /// The fitted mixture for one (attribute, class) pair.
    pub fn mixture(&self, attribute: usize, class: usize) -> &Gmm {
        &self.grid[attribute][class]
    }

    /// One attribute's evidence about a value: mixture densities under each
    /// class, rescaled by their maximum into a possibility profile. A value
    /// so remote that every density underflows yields the vacuous profile
    /// (all ones — no evidence either way).
    pub fn evidence(&self, attribute: usize, value: f64) -> PossMf {
        let densities: Vec<f64> = self.grid[attribute]
            .iter()
            .map(|gmm| gmm.pdf(value))
            .collect();
        let max = densities.iter().cloned().fold(0.0f64, f64::max);
        if max <= 0.0 {
            return PossMf::vacuous(self.frame.len());
        }
        PossMf::new(densities.iter().map(|d| d / max).collect())
            .expect("density ratios lie in [0, 1]")
    }

    /// The fusion circuit for one point: attribute `i`'s possibility profile
    /// is loaded onto qubit block `i·n..(i+1)·n` with simple rotations, and
    /// one multi-controlled X per class computes the conjunctive fusion into
    /// the final block, which is the output register. For `m` attributes
    /// and `n` classes that is `m·n` rotations, `n` controlled gates, and
    /// `(m+1)·n` qubits.
    pub fn fusion_circuit(&self, point: &[f64]) -> Result<Circuit> {
        if point.len() != self.attributes.len() {
            return Err(Error::AttributeCount {
                expected: self.attributes.len(),
                got: point.len(),
            });
        }
        let n = self.frame.len();
        let m = self.attributes.len();
        let mut circuit = Circuit::new((m + 1) * n);
        for (attribute, &value) in point.iter().enumerate() {
            let profile = self.evidence(attribute, value);
            circuit.append_shifted(&prepare_simple(&profile), attribute * n)?;
        }
        for k in 0..n {
            let controls = (0..m)
                .map(|attribute| ControlBit {
                    qubit: attribute * n + k,
                    polarity: Polarity::Positive,
                })
                .collect();
            circuit.push_mcx(controls, m * n + k)?;
        }
        circuit.set_output_register(m * n..(m + 1) * n)?;
        Ok(circuit)
    }

    /// Exact fused mass for a point, read off the fusion circuit's output
    /// register. Entry `F` is the fused mass of the class subset with
    /// index `F`.
    pub fn fused_distribution(&self, point: &[f64]) -> Result<Vec<f64>> {
        self.fusion_circuit(point)?.output_distribution()
    }

    /// The same fusion computed without circuits: each attribute's profile
    /// becomes a product mass and the masses fold conjunctively.
    pub fn classical_fused_mass(&self, point: &[f64]) -> Result<MassFunction> {
        if point.len() != self.attributes.len() {
            return Err(Error::AttributeCount {
                expected: self.attributes.len(),
                got: point.len(),
            });
        }
        let masses: Vec<MassFunction> = point
            .iter()
            .enumerate()
            .map(|(attribute, &value)| self.evidence(attribute, value).to_mass(self.frame.clone()))
            .collect::<Result<_>>()?;
        let refs: Vec<&MassFunction> = masses.iter().collect();
        conjunctive_fold(&refs)
    }

    /// Decides a class from an observed fused distribution (exact or
    /// shot-estimated), via the pignistic transform; ties go to the lowest
    /// class index. Fails with [`Error::TotalConflict`] when the whole mass
    /// sits on the empty set.
    pub fn classify_distribution(&self, observed: Vec<f64>) -> Result<Classification> {
        let mass = MassFunction::new(self.frame.clone(), observed)?;
        let pignistic = betp(&mass)?;
        let class_index = pignistic.argmax();
        Ok(Classification {
            class_index,
            label: self.frame.elements()[class_index].clone(),
            pignistic: pignistic.probabilities().to_vec(),
            fused: mass.values().to_vec(),
        })
    }

    /// Classifies one point end to end: fuse on the circuit, observe the
    /// output register per `backend`, decide pignistically.
    pub fn classify(&self, point: &[f64], backend: Backend) -> Result<Classification> {
        let distribution = self.fused_distribution(point)?;
        let observed = match backend {
            Backend::Exact => distribution,
            Backend::Shots { shots, seed } => sample(&distribution, shots, seed)?.frequencies(),
        };
        self.classify_distribution(observed)
    }

    /// Serializes the model as pretty JSON.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    /// Reads a model back; the grid shape and mixture parameters are
    /// validated so a hand-edited file fails loudly rather than
    /// misclassifying quietly.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let model: ClassifierModel = serde_json::from_str(&text)?;
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        if self.attributes.is_empty() {
            return Err(Error::ModelFile("no attributes".into()));
        }
        if self.components == 0 {
            return Err(Error::ModelFile("component count is zero".into()));
        }
        if self.grid.len() != self.attributes.len() {
            return Err(Error::ModelFile(format!(
                "grid has {} attribute rows, expected {}",
                self.grid.len(),
                self.attributes.len()
            )));
        }
        for (attribute, row) in self.grid.iter().enumerate() {
            if row.len() != self.frame.len() {
                return Err(Error::ModelFile(format!(
                    "attribute {attribute} has {} class mixtures, expected {}",
                    row.len(),
                    self.frame.len()
                )));
            }
            for (class, gmm) in row.iter().enumerate() {
                if gmm.components().len() != self.components {
                    return Err(Error::ModelFile(format!(
                        "mixture ({attribute}, {class}) has {} components, expected {}",
                        gmm.components().len(),
                        self.components
                    )));
                }
                let mut weight_sum = 0.0;
                for c in gmm.components() {
                    if !c.weight.is_finite() || c.weight < 0.0 {
                        return Err(Error::ModelFile(format!(
                            "mixture ({attribute}, {class}) has weight {}",
                            c.weight
                        )));
                    }
                    if !c.mean.is_finite() {
                        return Err(Error::ModelFile(format!(
                            "mixture ({attribute}, {class}) has mean {}",
                            c.mean
                        )));
                    }
                    if !(c.variance.is_finite() && c.variance > 0.0) {
                        return Err(Error::ModelFile(format!(
                            "mixture ({attribute}, {class}) has variance {}",
                            c.variance
                        )));
                    }
                    weight_sum += c.weight;
                }
                if (weight_sum - 1.0).abs() > 1e-6 {
                    return Err(Error::ModelFile(format!(
                        "mixture ({attribute}, {class}) weights sum to {weight_sum}"
                    )));
                }
            }
        }
        Ok(())
    }
}
