//! Dense statevector simulation.
//!
//! The simulator holds one amplitude per basis state (`2^width` of them) and
//! applies gates in program order. Internally amplitudes are kept as plain
//! `f64`: every gate matrix in the supported set is real, so states reached
//! from `|0…0⟩` never develop imaginary parts and real arithmetic is exact,
//! not an approximation. The public [`StateVector`] still exposes complex
//! amplitudes, which is the conventional shape downstream code expects.
//!
//! One structural optimization applies: a circuit's leading run of
//! single-qubit gates on pairwise-distinct qubits `0..t` (the universal
//! shape of preparation layers) is folded into a single in-place product
//! expansion costing `O(2^t)` instead of `t` full-array sweeps. Remaining
//! gates take the general per-gate path. Both paths compute identical
//! amplitudes; the equivalence is covered by tests driving the same circuits
//! through shuffled gate orders that defeat the fast path.

use std::ops::Range;

use num_complex::Complex64;

use crate::circuit::{Circuit, ControlBit, Gate};
use crate::error::{Error, Result};
use crate::rule::Polarity;

/// Default simulator width cap: 26 qubits keeps a complex statevector at
/// 1 GiB, the largest sensible footprint for an in-memory run.
pub const DEFAULT_WIDTH_CAP: usize = 26;

/// Amplitudes of a simulated circuit, one per basis state. Basis index bit
/// `q` is qubit `q`'s measured value.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    width: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Measurement probability of one basis state.
    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    /// All measurement probabilities.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Total squared magnitude; 1 within float round-off for any simulated
    /// circuit (every gate is orthogonal).
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Measurement distribution of a contiguous qubit register: entry `j` is the
/// probability that the register reads `j`, all other qubits summed out.
pub fn marginal(state: &StateVector, register: Range<usize>) -> Result<Vec<f64>> {
    if register.start > register.end || register.end > state.width {
        return Err(Error::BadOutputRegister {
            start: register.start,
            end: register.end,
            width: state.width,
        });
    }
    let bits = register.end - register.start;
    let mask = (1usize << bits) - 1;
    let mut probs = vec![0.0; 1 << bits];
    for (index, amp) in state.amps.iter().enumerate() {
        probs[index >> register.start & mask] += amp.norm_sqr();
    }
    Ok(probs)
}

impl Circuit {
    /// Runs the circuit from `|0…0⟩` under the default width cap.
    pub fn simulate(&self) -> Result<StateVector> {
        self.simulate_with_cap(DEFAULT_WIDTH_CAP)
    }

    /// Runs the circuit from `|0…0⟩`, rejecting widths over `cap`.
    pub fn simulate_with_cap(&self, cap: usize) -> Result<StateVector> {
        let amps = self.run_real(cap)?;
        Ok(StateVector {
            width: self.width(),
            amps: amps.into_iter().map(|re| Complex64::new(re, 0.0)).collect(),
        })
    }

    /// Measurement distribution of the circuit's output register, computed
    /// straight from the internal real amplitudes. Equivalent to
    /// `marginal(&self.simulate()?, self.output_register())` without
    /// materializing the complex statevector.
    pub fn output_distribution(&self) -> Result<Vec<f64>> {
        let amps = self.run_real(DEFAULT_WIDTH_CAP)?;
        let register = self.output_register();
        let bits = register.end - register.start;
        let mask = (1usize << bits) - 1;
        let mut probs = vec![0.0; 1 << bits];
        for (index, amp) in amps.iter().enumerate() {
            probs[index >> register.start & mask] += amp * amp;
        }
        Ok(probs)
    }

    fn run_real(&self, cap: usize) -> Result<Vec<f64>> {
        let width = self.width();
        if width > cap || width > DEFAULT_WIDTH_CAP {
            return Err(Error::WidthOverCap {
                width,
                cap: cap.min(DEFAULT_WIDTH_CAP),
            });
        }
        let mut amps = vec![0.0f64; 1usize << width];
        amps[0] = 1.0;

        let skip = self.apply_initial_product(&mut amps);
        for gate in &self.gates()[skip..] {
            apply_gate(&mut amps, gate);
        }
        Ok(amps)
    }

    /// Fast path for the leading single-qubit run. Returns how many gates it
    /// consumed (0 when the shape doesn't apply).
    fn apply_initial_product(&self, amps: &mut [f64]) -> usize {
        // Collect the leading maximal run of single-qubit gates on distinct
        // qubits. `columns[q]` is (amp of |0>, amp of |1>) after that qubit's
        // gate acts on |0>.
        let mut columns: Vec<Option<(f64, f64)>> = vec![None; self.width()];
        let mut consumed = 0;
        for gate in self.gates() {
            let (target, column) = match gate {
                Gate::X { target } => (*target, (0.0, 1.0)),
                Gate::Ry { target, angle } => {
                    let half = angle / 2.0;
                    (*target, (half.cos(), -half.sin()))
                }
                _ => break,
            };
            if columns[target].is_some() {
                break;
            }
            columns[target] = Some(column);
            consumed += 1;
        }
        // The expansion below assumes the touched qubits are exactly the low
        // ones, which keeps the nonzero support a dense prefix. Any other
        // shape falls back to general sweeps.
        let touched = consumed;
        if touched < 2 || columns[..touched].iter().any(Option::is_none) {
            return 0;
        }
        for (q, column) in columns[..touched].iter().enumerate() {
            let (v0, v1) = column.expect("checked above");
            let stride = 1usize << q;
            for i in 0..stride {
                let a = amps[i];
                amps[i + stride] = a * v1;
                amps[i] = a * v0;
            }
        }
        consumed
    }
}

/// Bit masks describing a control set: which qubits are controls and which
/// of those must read 1.
fn control_masks(controls: &[ControlBit]) -> (usize, usize) {
    let mut all = 0usize;
    let mut positive = 0usize;
    for c in controls {
        all |= 1 << c.qubit;
        if c.polarity == Polarity::Positive {
            positive |= 1 << c.qubit;
        }
    }
    (all, positive)
}

fn apply_gate(amps: &mut [f64], gate: &Gate) {
    match gate {
        Gate::X { target } => {
            let stride = 1usize << target;
            let mut base = 0;
            while base < amps.len() {
                for i in base..base + stride {
                    amps.swap(i, i + stride);
                }
                base += stride << 1;
            }
        }
        Gate::Ry { target, angle } => {
            let (c, s) = half_angle(*angle);
            let stride = 1usize << target;
            let mut base = 0;
            while base < amps.len() {
                for i in base..base + stride {
                    let x = amps[i];
                    let y = amps[i + stride];
                    amps[i] = c * x + s * y;
                    amps[i + stride] = -s * x + c * y;
                }
                base += stride << 1;
            }
        }
        Gate::CRy {
            controls,
            target,
            angle,
        } => {
            let (c, s) = half_angle(*angle);
            let (ctrl_mask, pos_mask) = control_masks(controls);
            let stride = 1usize << target;
            let mut base = 0;
            while base < amps.len() {
                for i in base..base + stride {
                    // control bits agree between i and i+stride, so one test
                    // covers the pair
                    if i & ctrl_mask == pos_mask {
                        let x = amps[i];
                        let y = amps[i + stride];
                        amps[i] = c * x + s * y;
                        amps[i + stride] = -s * x + c * y;
                    }
                }
                base += stride << 1;
            }
        }
        Gate::Mcx { controls, target } => {
            // Only indices whose controls all match move, and they move in
            // pairs differing in the target bit: enumerate the subcube of
            // free qubits instead of sweeping the whole array.
            let (ctrl_mask, pos_mask) = control_masks(controls);
            let target_bit = 1usize << target;
            let free_mask = (amps.len() - 1) & !(ctrl_mask | target_bit);
            let mut sub = 0usize;
            loop {
                let low = sub | pos_mask;
                amps.swap(low, low | target_bit);
                sub = sub.wrapping_sub(free_mask) & free_mask;
                if sub == 0 {
                    break;
                }
            }
        }
    }
}

fn half_angle(angle: f64) -> (f64, f64) {
    let half = angle / 2.0;
    (half.cos(), half.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_circuit_is_ground_state() {
        let state = Circuit::new(3).simulate().unwrap();
        assert_eq!(state.probability(0), 1.0);
        assert_eq!(state.amplitudes().len(), 8);
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn x_flips_basis_states() {
        let mut c = Circuit::new(2);
        c.push_x(0).unwrap();
        c.push_x(1).unwrap();
        let state = c.simulate().unwrap();
        assert_eq!(state.probability(0b11), 1.0);
    }

    #[test]
    fn ry_amplitudes_follow_the_matrix_convention() {
        // RY(α)|0> = (cos(α/2), -sin(α/2))
        let mut c = Circuit::new(1);
        c.push_ry(0, 1.0).unwrap();
        let state = c.simulate().unwrap();
        assert_abs_diff_eq!(state.amplitudes()[0].re, (0.5f64).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(state.amplitudes()[1].re, -(0.5f64).sin(), epsilon = 1e-15);
        assert_eq!(state.amplitudes()[0].im, 0.0);
    }

    #[test]
    fn ry_pi_reaches_one() {
        let mut c = Circuit::new(1);
        c.push_ry(0, std::f64::consts::PI).unwrap();
        let state = c.simulate().unwrap();
        assert_abs_diff_eq!(state.probability(1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn negative_controls_trigger_on_zero() {
        // MCX with -0: flips target when qubit 0 reads 0
        let mut c = Circuit::new(2);
        c.push_mcx(vec![ControlBit::negative(0)], 1).unwrap();
        let state = c.simulate().unwrap();
        assert_eq!(state.probability(0b10), 1.0);

        // positive control on |0> does nothing
        let mut c = Circuit::new(2);
        c.push_mcx(vec![ControlBit::positive(0)], 1).unwrap();
        let state = c.simulate().unwrap();
        assert_eq!(state.probability(0b00), 1.0);
    }

    #[test]
    fn cnot_entangles() {
        let mut c = Circuit::new(2);
        c.push_ry(0, std::f64::consts::FRAC_PI_2).unwrap();
        c.push_mcx(vec![ControlBit::positive(0)], 1).unwrap();
        let state = c.simulate().unwrap();
        assert_abs_diff_eq!(state.probability(0b00), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(state.probability(0b11), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(state.probability(0b01), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn cry_only_rotates_matching_branch() {
        let mut c = Circuit::new(2);
        c.push_ry(0, std::f64::consts::FRAC_PI_2).unwrap(); // even split on qubit 0
        c.push_cry(vec![ControlBit::positive(0)], 1, std::f64::consts::PI)
            .unwrap();
        let state = c.simulate().unwrap();
        // the |1> branch of qubit 0 got its qubit-1 flipped
        assert_abs_diff_eq!(state.probability(0b00), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(state.probability(0b11), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn width_cap_enforced() {
        let c = Circuit::new(27);
        assert!(matches!(
            c.simulate(),
            Err(Error::WidthOverCap { width: 27, cap: 26 })
        ));
        let c = Circuit::new(5);
        assert!(matches!(
            c.simulate_with_cap(4),
            Err(Error::WidthOverCap { width: 5, cap: 4 })
        ));
    }

    #[test]
    fn marginal_sums_out_other_qubits() {
        let mut c = Circuit::new(3);
        c.push_ry(0, std::f64::consts::FRAC_PI_2).unwrap();
        c.push_x(2).unwrap();
        let state = c.simulate().unwrap();
        let m = marginal(&state, 2..3).unwrap();
        assert_abs_diff_eq!(m[1], 1.0, epsilon = 1e-12);
        let m = marginal(&state, 0..1).unwrap();
        assert_abs_diff_eq!(m[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[1], 0.5, epsilon = 1e-12);
        // full-register marginal is the probability vector itself
        let m = marginal(&state, 0..3).unwrap();
        for (a, b) in m.iter().zip(state.probabilities()) {
            assert_abs_diff_eq!(a, &b, epsilon = 1e-15);
        }
        assert!(matches!(
            marginal(&state, 1..4),
            Err(Error::BadOutputRegister { .. })
        ));
    }

    #[test]
    fn output_distribution_matches_marginal_of_simulate() {
        let mut c = Circuit::new(4);
        c.push_ry(0, 0.7).unwrap();
        c.push_ry(1, 2.1).unwrap();
        c.push_ry(2, 1.1).unwrap();
        c.push_mcx(vec![ControlBit::positive(0), ControlBit::negative(1)], 3)
            .unwrap();
        c.set_output_register(2..4).unwrap();
        let direct = c.output_distribution().unwrap();
        let via_state = marginal(&c.simulate().unwrap(), 2..4).unwrap();
        for (a, b) in direct.iter().zip(&via_state) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn initial_product_fast_path_matches_general_sweeps() {
        // same gates, but an MCX first defeats the fast path; both runs must
        // produce identical amplitudes on the reordered-equivalent circuit
        let angles = [0.3, 1.2, 2.8, 0.9];
        let mut fast = Circuit::new(5);
        for (q, &a) in angles.iter().enumerate() {
            fast.push_ry(q, a).unwrap();
        }
        fast.push_mcx(vec![ControlBit::positive(0), ControlBit::positive(1)], 4)
            .unwrap();

        // general path: insert a no-op MCX on untouched qubits up front so
        // the leading run is broken, then apply the same rotations
        let mut slow = Circuit::new(5);
        slow.push_mcx(vec![ControlBit::positive(4)], 3).unwrap(); // no-op on |0...0>
        for (q, &a) in angles.iter().enumerate() {
            slow.push_ry(q, a).unwrap();
        }
        slow.push_mcx(vec![ControlBit::positive(0), ControlBit::positive(1)], 4)
            .unwrap();

        let fast_state = fast.simulate().unwrap();
        let slow_state = slow.simulate().unwrap();
        for (a, b) in fast_state.amplitudes().iter().zip(slow_state.amplitudes()) {
            assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-15);
        }
    }

    #[test]
    fn norm_is_preserved_by_every_gate_kind() {
        let mut c = Circuit::new(4);
        c.push_ry(0, 0.77).unwrap();
        c.push_ry(1, 1.9).unwrap();
        c.push_x(2).unwrap();
        c.push_cry(vec![ControlBit::negative(0)], 3, 2.2).unwrap();
        c.push_mcx(
            vec![
                ControlBit::positive(0),
                ControlBit::negative(1),
                ControlBit::positive(3),
            ],
            2,
        )
        .unwrap();
        // check after each prefix of the program
        for upto in 0..=c.gates().len() {
            let mut prefix = Circuit::new(4);
            for gate in &c.gates()[..upto] {
                match gate {
                    Gate::X { target } => prefix.push_x(*target).unwrap(),
                    Gate::Ry { target, angle } => prefix.push_ry(*target, *angle).unwrap(),
                    Gate::CRy {
                        controls,
                        target,
                        angle,
                    } => prefix.push_cry(controls.clone(), *target, *angle).unwrap(),
                    Gate::Mcx { controls, target } => {
                        prefix.push_mcx(controls.clone(), *target).unwrap()
                    }
                }
            }
            assert_abs_diff_eq!(prefix.simulate().unwrap().norm_sqr(), 1.0, epsilon = 1e-12);
        }
    }
}
