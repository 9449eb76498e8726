//! Circuit construction, simulation, preparation and rule compilation.
//!
//! Circuits here are straight-line gate lists over a fixed qubit count. The
//! gate set is exactly what evidence fusion needs — `X`, `RY`, controlled
//! `RY` and multi-controlled `X`, the latter two with per-control polarity
//! (a *negative* control triggers on `|0⟩`). All four matrices are real, so
//! states reachable from `|0…0⟩` have real amplitudes throughout.
//!
//! The `RY` convention used everywhere:
//!
//! ```text
//! RY(α) = [  cos(α/2)  sin(α/2) ]
//!         [ -sin(α/2)  cos(α/2) ]
//! ```
//!
//! so `RY(α)|0⟩ = cos(α/2)|0⟩ − sin(α/2)|1⟩` and the chance of measuring 1
//! is `sin²(α/2)`. Amplitude signs are not observable; every contract in
//! this crate is about squared amplitudes.

mod compile;
mod prepare;
mod sample;
mod simulate;

pub use compile::{compile_plan, compile_rule_circuit, negation_circuit};
pub use prepare::{prepare_simple, prepare_tree, rotation_angle};
pub use sample::{sample, ShotCounts, DISTRIBUTION_TOLERANCE};
pub use simulate::{marginal, StateVector, DEFAULT_WIDTH_CAP};

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::rule::Polarity;

/// A control qubit together with its trigger polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ControlBit {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl ControlBit {
    pub fn positive(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Negative,
        }
    }
}

/// One gate. Controlled kinds carry at least one control.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    X {
        target: usize,
    },
    Ry {
        target: usize,
        angle: f64,
    },
    CRy {
        controls: Vec<ControlBit>,
        target: usize,
        angle: f64,
    },
    Mcx {
        controls: Vec<ControlBit>,
        target: usize,
    },
}

/// Gate counts of a circuit, by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resources {
    pub width: usize,
    pub x: usize,
    pub ry: usize,
    pub cry: usize,
    pub mcx: usize,
}

impl Resources {
    pub fn total_gates(&self) -> usize {
        self.x + self.ry + self.cry + self.mcx
    }
}

impl fmt::Display for Resources {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "width={} x={} ry={} cry={} mcx={}",
            self.width, self.x, self.ry, self.cry, self.mcx
        )
    }
}

/// A fixed-width gate list with a designated output register.
///
/// The output register is the contiguous qubit range whose measurement
/// distribution carries the circuit's result; it defaults to all qubits and
/// is set by the compilers to the register holding the fused mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    output_register: Range<usize>,
}

impl Circuit {
    /// An empty circuit; the output register starts as all qubits.
    pub fn new(width: usize) -> Self {
        Self {
            width,
            gates: Vec::new(),
            output_register: 0..width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output_register(&self) -> Range<usize> {
        self.output_register.clone()
    }

    /// Declares which contiguous qubits hold the result.
    pub fn set_output_register(&mut self, register: Range<usize>) -> Result<()> {
        if register.start > register.end || register.end > self.width {
            return Err(Error::BadOutputRegister {
                start: register.start,
                end: register.end,
                width: self.width,
            });
        }
        self.output_register = register;
        Ok(())
    }

    fn check_target(&self, gate: &'static str, target: usize) -> Result<()> {
        if target >= self.width {
            return Err(Error::QubitOutOfRange {
                gate,
                qubit: target,
                width: self.width,
            });
        }
        Ok(())
    }

    fn check_controls(
        &self,
        gate: &'static str,
        controls: &[ControlBit],
        target: usize,
    ) -> Result<()> {
        if controls.is_empty() {
            return Err(Error::MissingControls { gate });
        }
        for (i, c) in controls.iter().enumerate() {
            if c.qubit >= self.width {
                return Err(Error::QubitOutOfRange {
                    gate,
                    qubit: c.qubit,
                    width: self.width,
                });
            }
            if c.qubit == target || controls[..i].iter().any(|prev| prev.qubit == c.qubit) {
                return Err(Error::OverlappingQubits {
                    gate,
                    qubit: c.qubit,
                });
            }
        }
        Ok(())
    }

    pub fn push_x(&mut self, target: usize) -> Result<()> {
        self.check_target("X", target)?;
        self.gates.push(Gate::X { target });
        Ok(())
    }

    pub fn push_ry(&mut self, target: usize, angle: f64) -> Result<()> {
        self.check_target("RY", target)?;
        self.gates.push(Gate::Ry { target, angle });
        Ok(())
    }

    pub fn push_cry(&mut self, controls: Vec<ControlBit>, target: usize, angle: f64) -> Result<()> {
        self.check_target("CRY", target)?;
        self.check_controls("CRY", &controls, target)?;
        self.gates.push(Gate::CRy {
            controls,
            target,
            angle,
        });
        Ok(())
    }

    pub fn push_mcx(&mut self, controls: Vec<ControlBit>, target: usize) -> Result<()> {
        self.check_target("MCX", target)?;
        self.check_controls("MCX", &controls, target)?;
        self.gates.push(Gate::Mcx { controls, target });
        Ok(())
    }

    /// Appends another circuit's gates with all qubit indices shifted up by
    /// `offset`. The output register is left untouched.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<()> {
        for gate in &other.gates {
            match gate {
                Gate::X { target } => self.push_x(target + offset)?,
                Gate::Ry { target, angle } => self.push_ry(target + offset, *angle)?,
                Gate::CRy {
                    controls,
                    target,
                    angle,
                } => {
                    let shifted = controls
                        .iter()
                        .map(|c| ControlBit {
                            qubit: c.qubit + offset,
                            polarity: c.polarity,
                        })
                        .collect();
                    self.push_cry(shifted, target + offset, *angle)?;
                }
                Gate::Mcx { controls, target } => {
                    let shifted = controls
                        .iter()
                        .map(|c| ControlBit {
                            qubit: c.qubit + offset,
                            polarity: c.polarity,
                        })
                        .collect();
                    self.push_mcx(shifted, target + offset)?;
                }
            }
        }
        Ok(())
    }

    /// Gate counts by kind.
    pub fn resources(&self) -> Resources {
        let mut r = Resources {
            width: self.width,
            x: 0,
            ry: 0,
            cry: 0,
            mcx: 0,
        };
        for gate in &self.gates {
            match gate {
                Gate::X { .. } => r.x += 1,
                Gate::Ry { .. } => r.ry += 1,
                Gate::CRy { .. } => r.cry += 1,
                Gate::Mcx { .. } => r.mcx += 1,
            }
        }
        r
    }

    /// Deterministic text listing, one gate per line in program order.
    /// Angles print in radians with six decimals; controls print as
    /// `+q`/`-q` for positive/negative polarity.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            match gate {
                Gate::X { target } => out.push_str(&format!("X target={target}\n")),
                Gate::Ry { target, angle } => {
                    out.push_str(&format!("RY target={target} angle={angle:.6}\n"))
                }
                Gate::CRy {
                    controls,
                    target,
                    angle,
                } => out.push_str(&format!(
                    "CRY target={target} controls={} angle={angle:.6}\n",
                    format_controls(controls)
                )),
                Gate::Mcx { controls, target } => out.push_str(&format!(
                    "MCX target={target} controls={}\n",
                    format_controls(controls)
                )),
            }
        }
        out
    }
}

fn format_controls(controls: &[ControlBit]) -> String {
    controls
        .iter()
        .map(|c| {
            let sign = match c.polarity {
                Polarity::Positive => '+',
                Polarity::Negative => '-',
            };
            format!("{sign}{}", c.qubit)
        })
        .collect::<Vec<_>>()
        .join(",")
}
