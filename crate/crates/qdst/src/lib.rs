//! Evidential reasoning with circuit-model execution.
//!
//! The crate models belief over a finite frame as mass functions on its
//! power set, combines independent sources under boolean set-algebra rules
//! (intersection, union, symmetric difference, or any expression in the
//! rule grammar), and executes those combinations two ways: a classical
//! enumeration over focal-set tuples, and a compiled qubit circuit run on
//! the built-in statevector simulator, where each subset maps to a basis
//! state and the output register's measurement distribution is the combined
//! mass. On top sits an attribute-fusion classifier: per-attribute Gaussian
//! mixtures turn feature values into possibility profiles, consonant belief
//! transformation makes them masses, conjunctive fusion merges the
//! attributes, and the pignistic transform picks a class.

pub mod circuit;
pub mod classifier;
pub mod dst;
pub mod error;
pub mod io;
pub mod rule;

pub use circuit::{
    compile_plan, compile_rule_circuit, marginal, negation_circuit, prepare_simple, prepare_tree,
    sample, Circuit, ControlBit, Gate, Resources, ShotCounts, StateVector,
};
pub use classifier::{
    evaluate, fit_gmm, Backend, ClassifierModel, Dataset, EvalBackend, EvalOptions, EvalReport, Gmm,
};
pub use dst::{
    betp, combine_conjunctive, combine_disjunctive, combine_exclusive, combine_rule,
    conjunctive_fold, Frame, MassFunction, Pignistic, PossMf,
};
pub use error::{Error, Result};
pub use rule::{lower, LoweredPlan, RuleExpr};
