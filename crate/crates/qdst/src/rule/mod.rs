//! A tiny Boolean DSL for combination rules.
//!
//! Rules describe how focal sets from several sources merge into one:
//! `&` intersects, `|` unites, `^` takes the symmetric difference and `~`
//! complements. Because focal sets are bit-indexed, a rule doubles as a
//! bitwise function on indices — evaluating `(~(m1 & m2)) & (m2 | m3)` on
//! three subset indices with the ordinary integer operators is exactly the
//! set-theoretic combination, applied to all elements at once.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (("|" | "^") term)*
//! term   := factor ("&" factor)*
//! factor := "~" factor | "(" expr ")" | identifier
//! ```
//!
//! `~` binds tightest, then `&`, then `|` and `^` at equal precedence,
//! left-associative. Runs of `&` and of `|` at one syntactic level collapse
//! into n-ary nodes; parenthesized groups keep their own nodes.

mod lower;
mod parse;

pub use lower::{lower, AndInput, LoweredPlan, Polarity, Stage};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Abstract syntax of a combination rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleExpr {
    /// A named source mass function.
    Var(String),
    /// Complement.
    Not(Box<RuleExpr>),
    /// n-ary intersection (at least one operand).
    And(Vec<RuleExpr>),
    /// n-ary union (at least one operand).
    Or(Vec<RuleExpr>),
    /// Binary symmetric difference.
    Xor(Box<RuleExpr>, Box<RuleExpr>),
}

impl RuleExpr {
    /// Parses rule text. Errors carry the byte offset of the offending token.
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    /// Variable names in order of first appearance, deduplicated. This order
    /// defines the input-register order of lowered plans.
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::new();
        self.collect_variables(&mut seen);
        seen
    }

    fn collect_variables(&self, seen: &mut Vec<String>) {
        match self {
            RuleExpr::Var(name) => {
                if !seen.iter().any(|s| s == name) {
                    seen.push(name.clone());
                }
            }
            RuleExpr::Not(inner) => inner.collect_variables(seen),
            RuleExpr::And(children) | RuleExpr::Or(children) => {
                for child in children {
                    child.collect_variables(seen);
                }
            }
            RuleExpr::Xor(a, b) => {
                a.collect_variables(seen);
                b.collect_variables(seen);
            }
        }
    }

    /// Evaluates the rule on single truth values.
    pub fn eval_bool(&self, bindings: &BTreeMap<String, bool>) -> Result<bool> {
        let mask = 1usize;
        let mut env = BTreeMap::new();
        for (k, &v) in bindings {
            env.insert(k.as_str(), v as usize);
        }
        Ok(self.eval_bits_inner(&env, mask)? == 1)
    }

    /// Evaluates the rule bitwise on subset indices: every bit position is
    /// an independent truth assignment. `mask` bounds the index width so
    /// complements stay inside the frame.
    pub fn eval_bits(&self, bindings: &BTreeMap<&str, usize>, mask: usize) -> Result<usize> {
        self.eval_bits_inner(bindings, mask)
    }

    fn eval_bits_inner(&self, env: &BTreeMap<&str, usize>, mask: usize) -> Result<usize> {
        Ok(match self {
            RuleExpr::Var(name) => *env
                .get(name.as_str())
                .ok_or_else(|| Error::UnboundVariable(name.clone()))?,
            RuleExpr::Not(inner) => mask & !inner.eval_bits_inner(env, mask)?,
            RuleExpr::And(children) => {
                let mut acc = mask;
                for child in children {
                    acc &= child.eval_bits_inner(env, mask)?;
                }
                acc
            }
            RuleExpr::Or(children) => {
                let mut acc = 0;
                for child in children {
                    acc |= child.eval_bits_inner(env, mask)?;
                }
                acc
            }
            RuleExpr::Xor(a, b) => a.eval_bits_inner(env, mask)? ^ b.eval_bits_inner(env, mask)?,
        })
    }

    /// Operator precedence for printing: higher binds tighter.
    fn precedence(&self) -> u8 {
        match self {
            RuleExpr::Var(_) => 3,
            RuleExpr::Not(_) => 2,
            RuleExpr::And(_) => 1,
            RuleExpr::Or(_) | RuleExpr::Xor(_, _) => 0,
        }
    }

    fn fmt_child(&self, child: &RuleExpr, wrap: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let _ = self;
        if wrap {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

/// Canonical text form. Reparsing the output reproduces the AST exactly:
/// grouped subtrees stay parenthesized, flat chains stay flat.
impl fmt::Display for RuleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleExpr::Var(name) => f.write_str(name),
            RuleExpr::Not(inner) => {
                f.write_str("~")?;
                // ~ binds tightest: anything but a bare variable or another ~
                // needs parentheses.
                self.fmt_child(inner, inner.precedence() < 2, f)
            }
            RuleExpr::And(children) => {
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" & ")?;
                    }
                    // equal precedence wraps too, so "a & (b & c)" survives
                    self.fmt_child(child, child.precedence() <= 1, f)?;
                }
                Ok(())
            }
            RuleExpr::Or(children) => {
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    self.fmt_child(child, child.precedence() == 0, f)?;
                }
                Ok(())
            }
            RuleExpr::Xor(a, b) => {
                // a left-nested ^ chain reparses identically without parens
                let wrap_left = a.precedence() == 0 && !matches!(**a, RuleExpr::Xor(_, _));
                self.fmt_child(a, wrap_left, f)?;
                f.write_str(" ^ ")?;
                self.fmt_child(b, b.precedence() == 0, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(name: &str) -> RuleExpr {
        RuleExpr::Var(name.to_string())
    }

    #[test]
    fn variables_in_first_appearance_order() {
        let rule = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
        assert_eq!(rule.variables(), ["m1", "m2", "m3"]);
    }

    #[test]
    fn eval_bool_truth_table() {
        let rule = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
        let case = |a: bool, b: bool, c: bool| {
            let mut env = BTreeMap::new();
            env.insert("m1".to_string(), a);
            env.insert("m2".to_string(), b);
            env.insert("m3".to_string(), c);
            rule.eval_bool(&env).unwrap()
        };
        assert!(!case(true, true, false)); // ~(1&1) kills it
        assert!(case(false, true, false));
        assert!(case(false, false, true));
        assert!(!case(true, false, false));
    }

    #[test]
    fn eval_bits_is_bitwise_set_algebra() {
        let rule = RuleExpr::parse("(~(m1 & m2)) & (m2 | m3)").unwrap();
        let mask = 0b11;
        let mut env = BTreeMap::new();
        env.insert("m1", 0b01usize);
        env.insert("m2", 0b01);
        env.insert("m3", 0b10);
        // ~(01 & 01) = 10; (01 | 10) = 11; 10 & 11 = 10
        assert_eq!(rule.eval_bits(&env, mask).unwrap(), 0b10);
    }

    #[test]
    fn eval_unbound_variable_errors() {
        let rule = RuleExpr::parse("m1 & m9").unwrap();
        let mut env = BTreeMap::new();
        env.insert("m1", 1usize);
        assert!(matches!(
            rule.eval_bits(&env, 1),
            Err(Error::UnboundVariable(name)) if name == "m9"
        ));
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "m1 & m2 & m3",
            "m1 | m2 | m3",
            "m1 ^ m2 ^ m3",
            "(~(m1 & m2)) & (m2 | m3)",
            "~~m1",
            "a & (b & c)",
            "a | b ^ c",
            "(a | b) ^ c",
            "a ^ (b ^ c)",
            "~(a | b) & c",
        ] {
            let ast = RuleExpr::parse(text).unwrap();
            let printed = ast.to_string();
            let reparsed = RuleExpr::parse(&printed).unwrap();
            assert_eq!(reparsed, ast, "{text:?} printed as {printed:?}");
        }
    }

    #[test]
    fn display_examples() {
        let ast = RuleExpr::And(vec![
            RuleExpr::Not(Box::new(RuleExpr::And(vec![var("m1"), var("m2")]))),
            RuleExpr::Or(vec![var("m2"), var("m3")]),
        ]);
        assert_eq!(ast.to_string(), "~(m1 & m2) & (m2 | m3)");
        let chain = RuleExpr::parse("m1 ^ m2 ^ m3").unwrap();
        assert_eq!(chain.to_string(), "m1 ^ m2 ^ m3");
    }
}
