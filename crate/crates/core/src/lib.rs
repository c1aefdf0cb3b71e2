//! Satisfiability for quantifier-free formulas over word equations, linear
//! length constraints and regular membership.
//!
//! The decision procedure rewrites the word equations of each disjunct into
//! solved forms, reads off the linear length constraints they imply, adds the
//! length atoms and the parameter constraints coming from regex atoms, and
//! hands the result to an integer arithmetic solver. Models are rebuilt from
//! the arithmetic model and checked against the input before being returned.

pub mod automata;
pub mod bench;
pub mod frontend;
pub mod lengths;
pub mod lia;
pub mod normalize;
pub mod oracle;
pub mod random;
pub mod semantics;
pub mod solved_form;
pub mod solver;
pub mod syntax;
pub mod twocounter;

pub use syntax::{free_vars, Alphabet, Assignment, Atom, Formula, LenTerm, Regex, StrTerm, Symbol};
