//! Finite automata for regular membership constraints.
//!
//! Regexes compile to total DFAs (Thompson construction, then subsets).
//! On top of that sit the Boolean operations, the length abstraction of a
//! regular language as a finite union of arithmetic progressions, and the
//! analysis of which parameter values put a parametric word into a language.

mod dfa;
mod param;
mod regex;
mod upset;

use thiserror::Error;

pub use dfa::{dfa_complement, dfa_intersect, dfa_is_empty, Dfa};
pub use param::{param_membership, ParamConstraintSet};
pub use regex::{complement_regex, dfa_to_regex, regex_to_dfa, Nfa};
pub use upset::{length_analysis, length_set, upset_member, upset_union, LengthAnalysis, Progression, UPSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("automata are over different alphabets")]
    AlphabetMismatch,
    #[error("parametric word contains an unfixed part")]
    UnfixedPartPresent,
}
