//! State preparation: loading a belief state onto qubits.
//!
//! Two encoders are provided. [`prepare_simple`] handles the product case —
//! a possibilistic profile whose joint mass factorizes per element — with one
//! rotation per qubit. [`prepare_tree`] handles an arbitrary mass function
//! with a layered cascade of controlled rotations: qubit `k` is rotated once
//! per assignment of qubits `0..k`, by the angle that splits that branch's
//! mass between `θ^(k+1)` absent and present. After either circuit the
//! squared amplitude of basis state `F` equals the mass assigned to the
//! subset with index `F`.

use crate::circuit::{Circuit, ControlBit};
use crate::dst::{MassFunction, PossMf};
use crate::rule::Polarity;

/// Angle whose rotation splits `|0⟩` in the ratio `w0 : w1`: after
/// `RY(rotation_angle(w0, w1))` the target reads 1 with probability
/// `w1 / (w0 + w1)`. Both weights zero yield 0 (identity), which is the
/// correct no-op for an unreachable branch.
pub fn rotation_angle(weight_zero: f64, weight_one: f64) -> f64 {
    2.0 * weight_one.sqrt().atan2(weight_zero.sqrt())
}

/// Encodes a possibility profile as one rotation per qubit. Qubit `k` reads
/// 1 with probability `π₁(k)`; the joint distribution over basis states is
/// the profile's product mass. Emits exactly `n` RY gates, including
/// zero-angle ones, so resource counts depend only on the frame size.
pub fn prepare_simple(profile: &PossMf) -> Circuit {
    let n = profile.len();
    let mut circuit = Circuit::new(n);
    for k in 0..n {
        let angle = rotation_angle(profile.pi0(k), profile.pi1()[k]);
        circuit
            .push_ry(k, angle)
            .expect("target k < n by construction");
    }
    circuit
}

/// Encodes an arbitrary mass function with a cascade of `2^n − 1` controlled
/// rotations. Layer `k` targets qubit `k` once per assignment pattern of
/// qubits `0..k`; the angle splits the mass lying in that branch between
/// subsets without and with element `k+1`. Branches carrying no mass get a
/// zero angle and stay unpopulated.
pub fn prepare_tree(mass: &MassFunction) -> Circuit {
    let n = mass.frame().len();
    let mut circuit = Circuit::new(n);
    for k in 0..n {
        let low_mask = (1usize << k) - 1;
        for pattern in 0..1usize << k {
            let mut weight_zero = 0.0;
            let mut weight_one = 0.0;
            for (index, &value) in mass.values().iter().enumerate() {
                if index & low_mask == pattern {
                    if index >> k & 1 == 1 {
                        weight_one += value;
                    } else {
                        weight_zero += value;
                    }
                }
            }
            let angle = rotation_angle(weight_zero, weight_one);
            if k == 0 {
                circuit.push_ry(0, angle).expect("width ≥ 1");
            } else {
                let controls = (0..k)
                    .map(|q| ControlBit {
                        qubit: q,
                        polarity: if pattern >> q & 1 == 1 {
                            Polarity::Positive
                        } else {
                            Polarity::Negative
                        },
                    })
                    .collect();
                circuit
                    .push_cry(controls, k, angle)
                    .expect("controls and target in range by construction");
            }
        }
    }
    circuit
}
