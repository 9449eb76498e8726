//! Compiling lowered combination plans to circuits.
//!
//! Each plan register becomes a block of `n` qubits, one per frame element;
//! bit `k` of a register says "element k+1 belongs to the set this register
//! holds". An AND stage becomes `n` multi-controlled X gates — bit `k` of
//! the fresh output register flips when bit `k` of every input register
//! matches the stage's polarity — which is exactly bitwise set intersection
//! (with complements folded into control polarity). A NOT stage becomes `n`
//! plain X gates, complementing a register in place. Run after state
//! preparation of the source registers, the output register's measurement
//! distribution equals the classically combined mass function.

use crate::circuit::{Circuit, ControlBit};
use crate::error::{Error, Result};
use crate::rule::{LoweredPlan, Polarity, Stage};

/// Circuit complementing an `n`-element set register in place: one X per
/// qubit. Applied after preparing a mass, the register's distribution
/// becomes the negated mass `m̄(F) = m(F̄)`.
pub fn negation_circuit(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    let mut circuit = Circuit::new(n);
    for k in 0..n {
        circuit.push_x(k).expect("k < n");
    }
    Ok(circuit)
}

/// Compiles a lowered plan's logic gates for an `n`-element frame. The
/// circuit spans `n · num_registers` qubits, register `r` occupying qubits
/// `r·n .. (r+1)·n`, and its output register is the plan's output block.
/// Source registers are left unprepared; see [`compile_rule_circuit`] to
/// bundle preparation in.
pub fn compile_plan(plan: &LoweredPlan, n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    let mut circuit = Circuit::new(n * plan.num_registers());
    emit_stages(&mut circuit, plan, n)?;
    circuit.set_output_register(plan.output() * n..(plan.output() + 1) * n)?;
    Ok(circuit)
}

/// Compiles a full combination circuit: the given preparation circuits are
/// laid onto consecutive source registers (one per plan variable, in
/// variable order), then the plan's logic gates run. Every preparation must
/// span exactly `n` qubits.
pub fn compile_rule_circuit(
    plan: &LoweredPlan,
    n: usize,
    preparations: &[Circuit],
) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    if preparations.len() != plan.variables().len() {
        return Err(Error::PreparationCount {
            expected: plan.variables().len(),
            got: preparations.len(),
        });
    }
    for (index, preparation) in preparations.iter().enumerate() {
        if preparation.width() != n {
            return Err(Error::PreparationWidth {
                index,
                got: preparation.width(),
                expected: n,
            });
        }
    }
    let mut circuit = Circuit::new(n * plan.num_registers());
    for (index, preparation) in preparations.iter().enumerate() {
        circuit.append_shifted(preparation, index * n)?;
    }
    emit_stages(&mut circuit, plan, n)?;
    circuit.set_output_register(plan.output() * n..(plan.output() + 1) * n)?;
    Ok(circuit)
}

fn emit_stages(circuit: &mut Circuit, plan: &LoweredPlan, n: usize) -> Result<()> {
    for stage in plan.stages() {
        match stage {
            Stage::And { inputs, out } => {
                // canonicalize: a rule may feed one register into the same
                // stage twice. A repeat with equal polarity is redundant
                // (F ∩ F = F); opposite polarities can never both hold, so
                // the stage contributes nothing and its fresh output
                // register keeps encoding the empty set, exactly matching
                // the classical F ∩ F̄ = ∅.
                let mut unique: Vec<(usize, Polarity)> = Vec::with_capacity(inputs.len());
                let mut contradictory = false;
                for input in inputs {
                    match unique.iter().find(|(reg, _)| *reg == input.reg) {
                        Some((_, polarity)) if *polarity != input.polarity => {
                            contradictory = true;
                            break;
                        }
                        Some(_) => {}
                        None => unique.push((input.reg, input.polarity)),
                    }
                }
                if contradictory {
                    continue;
                }
                for k in 0..n {
                    let controls = unique
                        .iter()
                        .map(|&(reg, polarity)| ControlBit {
                            qubit: reg * n + k,
                            polarity,
                        })
                        .collect();
                    circuit.push_mcx(controls, out * n + k)?;
                }
            }
            Stage::Not { reg } => {
                for k in 0..n {
                    circuit.push_x(reg * n + k)?;
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::prepare_tree;
    use crate::dst::{
        combine_conjunctive, combine_disjunctive, combine_exclusive, combine_rule, Frame,
        MassFunction,
    };
    use crate::rule::{lower, RuleExpr};
    use approx::assert_abs_diff_eq;

    fn frame2() -> Frame {
        Frame::new(["a", "b"]).unwrap()
    }

    fn sources() -> [MassFunction; 3] {
        [
            MassFunction::new(frame2(), vec![0.1, 0.2, 0.5, 0.2]).unwrap(),
            MassFunction::new(frame2(), vec![0.05, 0.45, 0.25, 0.25]).unwrap(),
            MassFunction::new(frame2(), vec![0.3, 0.1, 0.1, 0.5]).unwrap(),
        ]
    }

    /// Builds the full circuit for a rule over the given sources (prepared
    /// with the cascade encoder) and returns its output distribution.
    fn run_rule(rule: &str, masses: &[&MassFunction]) -> Vec<f64> {
        let expr = RuleExpr::parse(rule).unwrap();
        let plan = lower(&expr);
        let n = masses[0].frame().len();
        let preparations: Vec<Circuit> = masses.iter().map(|m| prepare_tree(m)).collect();
        let circuit = compile_rule_circuit(&plan, n, &preparations).unwrap();
        circuit.output_distribution().unwrap()
    }

    #[test]
    fn intersection_circuit_matches_the_classical_combination() {
        let [m1, m2, m3] = sources();
        let expected = combine_conjunctive(&[&m1, &m2, &m3]).unwrap();
        let got = run_rule("m1 & m2 & m3", &[&m1, &m2, &m3]);
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-9);
        }
    }

    #[test]
    fn union_circuit_matches_the_classical_combination() {
        let [m1, m2, m3] = sources();
        let expected = combine_disjunctive(&[&m1, &m2, &m3]).unwrap();
        let got = run_rule("m1 | m2 | m3", &[&m1, &m2, &m3]);
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-9);
        }
    }

    #[test]
    fn symmetric_difference_circuit_matches_the_classical_combination() {
        let [m1, m2, _] = sources();
        let expected = combine_exclusive(&m1, &m2).unwrap();
        let got = run_rule("m1 ^ m2", &[&m1, &m2]);
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-9);
        }
    }

    #[test]
    fn customized_rule_circuit_matches_the_classical_combination() {
        let [m1, m2, m3] = sources();
        let expr = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
        let expected = combine_rule(
            &expr,
            &[
                ("m1".into(), m1.clone()),
                ("m2".into(), m2.clone()),
                ("m3".into(), m3.clone()),
            ],
        )
        .unwrap();
        let got = run_rule("(~(m1 & m2)) & (m2 | m3)", &[&m1, &m2, &m3]);
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-9);
        }
    }

    #[test]
    fn intersection_plan_compiles_to_one_mcx_per_element() {
        let expr = RuleExpr::parse("m1 & m2").unwrap();
        let plan = lower(&expr);
        let circuit = compile_plan(&plan, 2).unwrap();
        assert_eq!(circuit.width(), 6); // 3 registers × 2 elements
        let resources = circuit.resources();
        assert_eq!(resources.mcx, 2);
        assert_eq!(resources.total_gates(), 2);
        assert_eq!(circuit.output_register(), 4..6);
    }

    #[test]
    fn union_plan_adds_a_complement_layer() {
        let expr = RuleExpr::parse("m1 | m2").unwrap();
        let plan = lower(&expr);
        let circuit = compile_plan(&plan, 2).unwrap();
        let resources = circuit.resources();
        assert_eq!(resources.mcx, 2);
        assert_eq!(resources.x, 2);
    }

    #[test]
    fn customized_plan_register_layout() {
        // three AND stages on top of three sources: 6 registers of 2 qubits
        let expr = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
        let plan = lower(&expr);
        let circuit = compile_plan(&plan, 2).unwrap();
        assert_eq!(circuit.width(), 12);
        let resources = circuit.resources();
        assert_eq!(resources.mcx, 6); // 3 AND stages × 2 elements
        assert_eq!(resources.x, 2); // 1 NOT stage × 2 elements
    }

    #[test]
    fn negation_circuit_complements_a_prepared_mass() {
        let [m1, _, _] = sources();
        let mut circuit = Circuit::new(2);
        circuit.append_shifted(&prepare_tree(&m1), 0).unwrap();
        circuit
            .append_shifted(&negation_circuit(2).unwrap(), 0)
            .unwrap();
        let got = circuit.output_distribution().unwrap();
        let expected = m1.negation();
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-12);
        }
    }

    #[test]
    fn repeated_sources_in_one_stage_are_canonicalized() {
        let [m1, _, _] = sources();
        // idempotent intersection and union: the source itself
        for rule in ["m1 & m1", "m1 | m1"] {
            let got = run_rule(rule, &[&m1]);
            for (index, &value) in m1.values().iter().enumerate() {
                assert_abs_diff_eq!(got[index], value, epsilon = 1e-12);
            }
        }
        // per-element contradiction: everything lands on the empty set
        let got = run_rule("m1 ^ m1", &[&m1]);
        assert_abs_diff_eq!(got[0], 1.0, epsilon = 1e-12);
        // and the classical route agrees
        let expr = RuleExpr::parse("m1 ^ m1").unwrap();
        let expected = combine_rule(&expr, &[("m1".into(), m1.clone())]).unwrap();
        for (index, &value) in expected.values().iter().enumerate() {
            assert_abs_diff_eq!(got[index], value, epsilon = 1e-12);
        }
    }

    #[test]
    fn preparation_shape_is_validated() {
        let expr = RuleExpr::parse("m1 & m2").unwrap();
        let plan = lower(&expr);
        let [m1, _, _] = sources();
        let one = prepare_tree(&m1);
        assert!(matches!(
            compile_rule_circuit(&plan, 2, std::slice::from_ref(&one)),
            Err(Error::PreparationCount {
                expected: 2,
                got: 1
            })
        ));
        let narrow = Circuit::new(3);
        assert!(matches!(
            compile_rule_circuit(&plan, 2, &[one, narrow]),
            Err(Error::PreparationWidth {
                index: 1,
                got: 3,
                expected: 2
            })
        ));
    }
}
