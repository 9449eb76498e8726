//! Mass functions, possibility assignments and pignistic probabilities.

use crate::dst::frame::Frame;
use crate::error::{Error, Result};

/// Validation tolerance on the total mass: entries must sum to 1 within this.
/// Out-of-tolerance inputs are rejected, never renormalized.
pub const MASS_SUM_TOLERANCE: f64 = 1e-9;

/// A basic belief assignment over a frame.
///
/// Entry `i` is the mass of the subset with Boolean index `i` (see
/// [`Frame`] for the encoding); the vector has `2^n` entries, each
/// non-negative, summing to 1 within [`MASS_SUM_TOLERANCE`]. The empty set
/// may carry mass (unnormalized conjunctive combination produces exactly
/// that), so index 0 is as valid as any other.
#[derive(Debug, Clone, PartialEq)]
pub struct MassFunction {
    frame: Frame,
    values: Vec<f64>,
}

impl MassFunction {
    /// Validates and wraps a dense mass vector.
    pub fn new(frame: Frame, values: Vec<f64>) -> Result<Self> {
        if values.len() != frame.num_subsets() {
            return Err(Error::MassLength {
                elements: frame.len(),
                expected: frame.num_subsets(),
                got: values.len(),
            });
        }
        for (index, &v) in values.iter().enumerate() {
            if v < 0.0 || !v.is_finite() {
                return Err(Error::NegativeMass { index, value: v });
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > MASS_SUM_TOLERANCE {
            return Err(Error::MassSum {
                sum,
                tolerance: MASS_SUM_TOLERANCE,
            });
        }
        Ok(Self { frame, values })
    }

    /// The vacuous mass: everything on the whole frame.
    pub fn vacuous(frame: Frame) -> Self {
        let mut values = vec![0.0; frame.num_subsets()];
        values[frame.full_mask()] = 1.0;
        Self { frame, values }
    }

    /// All mass on a single subset.
    pub fn categorical(frame: Frame, index: usize) -> Result<Self> {
        if index >= frame.num_subsets() {
            return Err(Error::MassLength {
                elements: frame.len(),
                expected: frame.num_subsets(),
                got: index + 1,
            });
        }
        let mut values = vec![0.0; frame.num_subsets()];
        values[index] = 1.0;
        Ok(Self { frame, values })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Dense mass vector indexed by subset.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Mass of one subset.
    pub fn value(&self, index: usize) -> f64 {
        self.values[index]
    }

    /// The negation: mass of each subset moves to its complement,
    /// `m̄(F) = m(F̄)`. Complementing twice gives back the original.
    pub fn negation(&self) -> Self {
        let mask = self.frame.full_mask();
        let values = (0..self.values.len())
            .map(|i| self.values[mask ^ i])
            .collect();
        Self {
            frame: self.frame.clone(),
            values,
        }
    }
}

/// A possibility assignment: one `pi1` value per frame element, each in
/// [0, 1]. `pi1[k]` is the possibility that element `k` is the true one;
/// the complementary `pi0[k] = 1 - pi1[k]` is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct PossMf {
    pi1: Vec<f64>,
}

impl PossMf {
    pub fn new(pi1: Vec<f64>) -> Result<Self> {
        if pi1.is_empty() {
            return Err(Error::EmptyPossibility);
        }
        for (index, &value) in pi1.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || !value.is_finite() {
                return Err(Error::PossibilityRange { index, value });
            }
        }
        Ok(Self { pi1 })
    }

    /// The vacuous assignment (`pi1 = 1` everywhere): every element fully
    /// possible, which turns into all mass on the whole frame.
    pub fn vacuous(len: usize) -> Self {
        Self {
            pi1: vec![1.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.pi1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi1.is_empty()
    }

    /// Per-element possibilities of "present".
    pub fn pi1(&self) -> &[f64] {
        &self.pi1
    }

    /// Per-element possibilities of "absent".
    pub fn pi0(&self, k: usize) -> f64 {
        1.0 - self.pi1[k]
    }

    /// Expands the assignment into a mass function: each element contributes
    /// independently, so the mass of subset `F` is the product over elements
    /// of `pi1[k]` (element in `F`) or `1 - pi1[k]` (element not in `F`).
    /// The result is a product measure; the bits of its focal indices are
    /// statistically independent.
    pub fn to_mass(&self, frame: Frame) -> Result<MassFunction> {
        if frame.len() != self.pi1.len() {
            return Err(Error::MassLength {
                elements: frame.len(),
                expected: frame.num_subsets(),
                got: 1 << self.pi1.len(),
            });
        }
        let mut values = vec![0.0; frame.num_subsets()];
        for (index, slot) in values.iter_mut().enumerate() {
            let mut p = 1.0;
            for (k, &pi1) in self.pi1.iter().enumerate() {
                p *= if index >> k & 1 == 1 { pi1 } else { 1.0 - pi1 };
            }
            *slot = p;
        }
        // The products telescope to exactly 1 in exact arithmetic; float
        // round-off stays far inside the validation tolerance.
        MassFunction::new(frame, values)
    }
}

/// A pignistic probability distribution over frame elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Pignistic {
    probs: Vec<f64>,
}

impl Pignistic {
    /// Per-element probabilities, in frame order.
    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Index of the most probable element; exact ties resolve to the lowest
    /// element index.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (k, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = k;
            }
        }
        best
    }
}

/// The pignistic transform: each focal set spreads its mass uniformly over
/// its elements, after discarding the mass of the empty set,
///
/// ```text
/// BetP(e) = sum over focal sets F containing e of m(F) / ((1 - m(empty)) |F|)
/// ```
///
/// Errors with [`Error::TotalConflict`] when all mass sits on the empty set.
pub fn betp(mass: &MassFunction) -> Result<Pignistic> {
    let n = mass.frame().len();
    let conflict = mass.value(0);
    let remaining = 1.0 - conflict;
    if remaining <= MASS_SUM_TOLERANCE {
        return Err(Error::TotalConflict {
            mass: mass.values().to_vec(),
        });
    }
    let mut probs = vec![0.0; n];
    for index in 1..mass.frame().num_subsets() {
        let v = mass.value(index);
        if v == 0.0 {
            continue;
        }
        let share = v / (remaining * index.count_ones() as f64);
        for (k, prob) in probs.iter_mut().enumerate() {
            if index >> k & 1 == 1 {
                *prob += share;
            }
        }
    }
    Ok(Pignistic { probs })
}
