//! Lowering rule ASTs into staged register plans.
//!
//! A plan manipulates Boolean registers: one input register per rule
//! variable plus one fresh register per AND stage. Only two stage kinds
//! exist, chosen because both have direct circuit realizations:
//!
//! * `And` — conjunction of existing registers into a fresh one, where each
//!   input may be read complemented (its *polarity*). A union lowers through
//!   De Morgan as an all-negative AND followed by `Not`; a symmetric
//!   difference expands to `(a & ~b) | (~a & b)` first.
//! * `Not` — in-place complement of an existing register.
//!
//! Negations on leaves or on AND inputs never materialize: they fold into
//! the reading polarity. Double negations cancel before lowering begins.

use crate::rule::RuleExpr;

/// Reading polarity of a register used as an AND input, and equally the
/// polarity of a circuit control qubit (negative = trigger on 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flipped(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    fn from_negated(negated: bool) -> Self {
        if negated {
            Polarity::Negative
        } else {
            Polarity::Positive
        }
    }
}

/// One conjunct of an AND stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AndInput {
    pub reg: usize,
    pub polarity: Polarity,
}

/// A single plan step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    /// `out := AND over inputs` (respecting polarities); `out` is fresh.
    And { inputs: Vec<AndInput>, out: usize },
    /// `reg := NOT reg`, in place.
    Not { reg: usize },
}

/// A lowered rule: registers `0..variables.len()` are the inputs, every AND
/// stage appends one register, and `output` names the register holding the
/// result after all stages ran.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweredPlan {
    variables: Vec<String>,
    stages: Vec<Stage>,
    output: usize,
    num_registers: usize,
}

impl LoweredPlan {
    /// Rule variables in input-register order.
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    /// Register holding the result.
    pub fn output(&self) -> usize {
        self.output
    }

    /// Inputs plus one per AND stage.
    pub fn num_registers(&self) -> usize {
        self.num_registers
    }

    pub fn and_stage_count(&self) -> usize {
        self.stages
            .iter()
            .filter(|s| matches!(s, Stage::And { .. }))
            .count()
    }

    /// Reference interpreter: runs the plan on one truth assignment
    /// (inputs in `variables()` order) and returns the output register.
    pub fn evaluate(&self, inputs: &[bool]) -> bool {
        assert_eq!(inputs.len(), self.variables.len(), "one input per variable");
        let mut regs = vec![false; self.num_registers];
        regs[..inputs.len()].copy_from_slice(inputs);
        for stage in &self.stages {
            match stage {
                Stage::And { inputs, out } => {
                    regs[*out] = inputs
                        .iter()
                        .all(|input| regs[input.reg] == (input.polarity == Polarity::Positive));
                }
                Stage::Not { reg } => regs[*reg] = !regs[*reg],
            }
        }
        regs[self.output]
    }
}

/// Removes `~~x` pairs so lowering sees at most single negations.
fn strip_double_negation(expr: &RuleExpr) -> RuleExpr {
    match expr {
        RuleExpr::Var(_) => expr.clone(),
        RuleExpr::Not(inner) => match &**inner {
            RuleExpr::Not(inner2) => strip_double_negation(inner2),
            _ => RuleExpr::Not(Box::new(strip_double_negation(inner))),
        },
        RuleExpr::And(children) => {
            RuleExpr::And(children.iter().map(strip_double_negation).collect())
        }
        RuleExpr::Or(children) => {
            RuleExpr::Or(children.iter().map(strip_double_negation).collect())
        }
        RuleExpr::Xor(a, b) => RuleExpr::Xor(
            Box::new(strip_double_negation(a)),
            Box::new(strip_double_negation(b)),
        ),
    }
}

struct Lowerer {
    variables: Vec<String>,
    stages: Vec<Stage>,
    next_register: usize,
}

/// A subexpression either lives in a register directly or as that
/// register's complement (the pending negation folds into polarities).
#[derive(Clone, Copy)]
struct Value {
    reg: usize,
    negated: bool,
}

impl Lowerer {
    fn fresh(&mut self) -> usize {
        let r = self.next_register;
        self.next_register += 1;
        r
    }

    fn input(&self, value: Value) -> AndInput {
        AndInput {
            reg: value.reg,
            polarity: Polarity::from_negated(value.negated),
        }
    }

    fn lower_node(&mut self, expr: &RuleExpr) -> Value {
        match expr {
            RuleExpr::Var(name) => {
                let reg = self
                    .variables
                    .iter()
                    .position(|v| v == name)
                    .expect("variables preallocated");
                Value {
                    reg,
                    negated: false,
                }
            }
            RuleExpr::Not(inner) => {
                let value = self.lower_node(inner);
                Value {
                    reg: value.reg,
                    negated: !value.negated,
                }
            }
            RuleExpr::And(children) => {
                assert!(!children.is_empty(), "AND node needs operands");
                let inputs: Vec<AndInput> = children
                    .iter()
                    .map(|c| {
                        let v = self.lower_node(c);
                        self.input(v)
                    })
                    .collect();
                let out = self.fresh();
                self.stages.push(Stage::And { inputs, out });
                Value {
                    reg: out,
                    negated: false,
                }
            }
            RuleExpr::Or(children) => {
                assert!(!children.is_empty(), "OR node needs operands");
                // De Morgan: OR = NOT(AND of complements)
                let inputs: Vec<AndInput> = children
                    .iter()
                    .map(|c| {
                        let mut v = self.lower_node(c);
                        v.negated = !v.negated;
                        self.input(v)
                    })
                    .collect();
                let out = self.fresh();
                self.stages.push(Stage::And { inputs, out });
                self.stages.push(Stage::Not { reg: out });
                Value {
                    reg: out,
                    negated: false,
                }
            }
            RuleExpr::Xor(a, b) => {
                // a ^ b = (a & ~b) | (~a & b); each operand lowers once and
                // is then read twice with opposite polarities.
                let va = self.lower_node(a);
                let vb = self.lower_node(b);
                let left = self.fresh();
                self.stages.push(Stage::And {
                    inputs: vec![
                        self.input(va),
                        self.input(Value {
                            reg: vb.reg,
                            negated: !vb.negated,
                        }),
                    ],
                    out: left,
                });
                let right = self.fresh();
                self.stages.push(Stage::And {
                    inputs: vec![
                        self.input(Value {
                            reg: va.reg,
                            negated: !va.negated,
                        }),
                        self.input(vb),
                    ],
                    out: right,
                });
                let union = self.fresh();
                self.stages.push(Stage::And {
                    inputs: vec![
                        AndInput {
                            reg: left,
                            polarity: Polarity::Negative,
                        },
                        AndInput {
                            reg: right,
                            polarity: Polarity::Negative,
                        },
                    ],
                    out: union,
                });
                self.stages.push(Stage::Not { reg: union });
                Value {
                    reg: union,
                    negated: false,
                }
            }
        }
    }
}

/// Lowers a rule into a staged plan.
pub fn lower(expr: &RuleExpr) -> LoweredPlan {
    let expr = strip_double_negation(expr);
    let variables = expr.variables();
    let mut lowerer = Lowerer {
        next_register: variables.len(),
        variables,
        stages: Vec::new(),
    };
    let value = lowerer.lower_node(&expr);
    // A trailing complement cannot fold anywhere, so it becomes a real stage
    // (this is how a bare `~m1` turns into one register-wide NOT).
    if value.negated {
        lowerer.stages.push(Stage::Not { reg: value.reg });
    }
    LoweredPlan {
        variables: lowerer.variables,
        stages: lowerer.stages,
        output: value.reg,
        num_registers: lowerer.next_register,
    }
}
