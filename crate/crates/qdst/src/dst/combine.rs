//! Classical (exact, exhaustive) combination of mass functions.
//!
//! These functions are the reference semantics everything else is tested
//! against: they enumerate every tuple of focal sets — `(2^n)^p` of them for
//! `p` sources over `n` elements — and accumulate the product mass onto the
//! subset the rule maps the tuple to. No normalization happens anywhere;
//! conflict stays on the empty set.
//!
//! The exhaustive walk is capped at `n·p <= 24` index bits. The conjunctive
//! rule is associative, so [`conjunctive_fold`] offers the same result as
//! [`combine_conjunctive`] at pairwise cost for long source lists (this is
//! the classical route the classifier takes).

use std::collections::BTreeMap;

use crate::dst::mass::MassFunction;
use crate::error::{Error, Result};
use crate::rule::RuleExpr;

/// Cap on the exhaustive enumeration: `n * p` may not exceed this.
pub const ENUMERATION_BIT_CAP: usize = 24;

fn check_same_frame(masses: &[&MassFunction]) -> Result<()> {
    for pair in masses.windows(2) {
        if pair[0].frame() != pair[1].frame() {
            return Err(Error::FrameMismatch);
        }
    }
    Ok(())
}

fn check_cap(n: usize, p: usize) -> Result<()> {
    let bits = n * p;
    if bits > ENUMERATION_BIT_CAP {
        return Err(Error::EnumerationTooLarge {
            bits,
            cap: ENUMERATION_BIT_CAP,
        });
    }
    Ok(())
}

/// Shared enumeration core: walks all focal-set tuples in lexicographic
/// order (last source fastest) and folds each tuple's index through `map`.
fn combine_by(masses: &[&MassFunction], map: impl Fn(&[usize]) -> usize) -> Result<MassFunction> {
    check_same_frame(masses)?;
    let frame = masses[0].frame().clone();
    let size = frame.num_subsets();
    check_cap(frame.len(), masses.len())?;

    let mut out = vec![0.0; size];
    let mut tuple = vec![0usize; masses.len()];
    loop {
        let mut product = 1.0;
        for (m, &i) in masses.iter().zip(&tuple) {
            product *= m.value(i);
        }
        if product != 0.0 {
            out[map(&tuple)] += product;
        }
        // advance the odometer
        let mut pos = masses.len();
        loop {
            if pos == 0 {
                // sums of products of non-negative masses: total is exactly
                // the product of the per-source totals, i.e. 1 within float
                // round-off
                return MassFunction::new(frame, out);
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < size {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// Conjunctive combination (intersection of focal sets), p-ary.
pub fn combine_conjunctive(masses: &[&MassFunction]) -> Result<MassFunction> {
    if masses.len() < 2 {
        return Err(Error::TooFewSources {
            got: masses.len(),
            min: 2,
        });
    }
    let mask = masses[0].frame().full_mask();
    combine_by(masses, |tuple| tuple.iter().fold(mask, |acc, &i| acc & i))
}

/// Disjunctive combination (union of focal sets), p-ary.
pub fn combine_disjunctive(masses: &[&MassFunction]) -> Result<MassFunction> {
    if masses.len() < 2 {
        return Err(Error::TooFewSources {
            got: masses.len(),
            min: 2,
        });
    }
    combine_by(masses, |tuple| tuple.iter().fold(0, |acc, &i| acc | i))
}

/// Exclusive-disjunctive combination (symmetric difference), binary.
pub fn combine_exclusive(a: &MassFunction, b: &MassFunction) -> Result<MassFunction> {
    combine_by(&[a, b], |tuple| tuple[0] ^ tuple[1])
}

/// Combination under an arbitrary rule.
///
/// Each rule variable binds to the equally-named source; every source
/// contributes one focal-set index per tuple no matter how often the rule
/// mentions it (so `m2` in `(~(m1 & m2)) & (m2 | m3)` refers to one draw
/// from `m2`, used twice). Unused sources are rejected as unbound in
/// reverse: they simply don't participate; unknown variables error.
pub fn combine_rule(rule: &RuleExpr, sources: &[(String, MassFunction)]) -> Result<MassFunction> {
    for (i, (name, _)) in sources.iter().enumerate() {
        if sources[..i].iter().any(|(other, _)| other == name) {
            return Err(Error::DuplicateSource(name.clone()));
        }
    }
    let variables = rule.variables();
    // bind variables in first-appearance order; each gets a tuple slot
    let mut bound: Vec<&MassFunction> = Vec::with_capacity(variables.len());
    for name in &variables {
        let mass = sources
            .iter()
            .find(|(source, _)| source == name)
            .map(|(_, mass)| mass)
            .ok_or_else(|| Error::UnboundVariable(name.clone()))?;
        bound.push(mass);
    }
    if bound.is_empty() {
        return Err(Error::TooFewSources { got: 0, min: 1 });
    }
    let mask = bound[0].frame().full_mask();
    combine_by(&bound, |tuple| {
        let mut env = BTreeMap::new();
        for (name, &index) in variables.iter().zip(tuple) {
            env.insert(name.as_str(), index);
        }
        rule.eval_bits(&env, mask)
            .expect("all rule variables are bound")
    })
}

/// Pairwise left fold of the conjunctive rule. Associativity makes this
/// exactly [`combine_conjunctive`] at `(p-1)·4^n` cost instead of `2^(n·p)`,
/// which keeps long source lists (one per classifier attribute) cheap.
pub fn conjunctive_fold(masses: &[&MassFunction]) -> Result<MassFunction> {
    if masses.len() < 2 {
        return Err(Error::TooFewSources {
            got: masses.len(),
            min: 2,
        });
    }
    check_same_frame(masses)?;
    let mut acc = masses[0].clone();
    for m in &masses[1..] {
        acc = combine_conjunctive(&[&acc, m])?;
    }
    Ok(acc)
}
