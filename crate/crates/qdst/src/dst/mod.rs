//! Dempster-Shafer fundamentals: frames, mass functions, possibility
//! assignments, pignistic decisions and the classical combination rules.

mod combine;
mod frame;
mod mass;

pub use combine::{
    combine_conjunctive, combine_disjunctive, combine_exclusive, combine_rule, conjunctive_fold,
    ENUMERATION_BIT_CAP,
};
pub use frame::{Frame, MAX_FRAME_ELEMENTS};
pub use mass::{betp, MassFunction, Pignistic, PossMf, MASS_SUM_TOLERANCE};
