//! Evaluation of terms and formulas under an assignment.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::{regex_to_dfa, Dfa};
use crate::syntax::{Alphabet, Assignment, Atom, Formula, LenTerm, Regex, StrTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} has no value")]
    UnmappedVariable(String),
}

pub fn eval_str(t: &StrTerm, a: &Assignment) -> Result<String, EvalError> {
    let mut out = String::new();
    push_str(t, a, &mut out)?;
    Ok(out)
}

fn push_str(t: &StrTerm, a: &Assignment, out: &mut String) -> Result<(), EvalError> {
    match t {
        StrTerm::Lit(w) => out.push_str(w),
        StrTerm::Var(v) => out.push_str(a.strs.get(v).ok_or_else(|| EvalError::UnmappedVariable(v.clone()))?),
        StrTerm::Concat(ps) => {
            for p in ps {
                push_str(p, a, out)?;
            }
        }
    }
    Ok(())
}

fn str_len(t: &StrTerm, a: &Assignment) -> Result<i128, EvalError> {
    Ok(match t {
        StrTerm::Lit(w) => w.chars().count() as i128,
        StrTerm::Var(v) => {
            a.strs.get(v).ok_or_else(|| EvalError::UnmappedVariable(v.clone()))?.chars().count() as i128
        }
        StrTerm::Concat(ps) => {
            let mut n = 0;
            for p in ps {
                n += str_len(p, a)?;
            }
            n
        }
    })
}

pub fn eval_len(t: &LenTerm, a: &Assignment) -> Result<i128, EvalError> {
    Ok(match t {
        LenTerm::IntConst(n) => *n as i128,
        LenTerm::IntVar(v) => *a.ints.get(v).ok_or_else(|| EvalError::UnmappedVariable(v.clone()))? as i128,
        LenTerm::Len(s) => str_len(s, a)?,
        LenTerm::Sum(ts) => {
            let mut n = 0i128;
            for (c, t) in ts {
                n += *c as i128 * eval_len(t, a)?;
            }
            n
        }
    })
}

/// Formula evaluation with a cache of compiled regexes.
#[derive(Debug, Default)]
pub struct Evaluator {
    cache: HashMap<Regex, Dfa>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn member(&mut self, w: &str, r: &Regex) -> bool {
        let d = self.cache.entry(r.clone()).or_insert_with(|| {
            let mut letters = std::collections::BTreeSet::new();
            r.letters(&mut letters);
            regex_to_dfa(r, &Alphabet::new(letters)).expect("regex letters form its own alphabet")
        });
        d.accepts(w)
    }

    pub fn eval_atom(&mut self, atom: &Atom, a: &Assignment) -> Result<bool, EvalError> {
        Ok(match atom {
            Atom::WordEq(l, r) => eval_str(l, a)? == eval_str(r, a)?,
            Atom::LenLeq(t, c) => eval_len(t, a)? <= *c as i128,
            Atom::InRe(t, r) => {
                let w = eval_str(t, a)?;
                self.member(&w, r)
            }
        })
    }

    pub fn eval(&mut self, phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
        Ok(match phi {
            Formula::Atom(atom) => self.eval_atom(atom, a)?,
            Formula::And(fs) => {
                for f in fs {
                    if !self.eval(f, a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if self.eval(f, a)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Not(f) => !self.eval(f, a)?,
        })
    }
}

/// True iff `a` satisfies `phi`.
pub fn eval_formula(phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    Evaluator::new().eval(phi, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_x_eq_x_ba() -> Formula {
        Formula::eq(
            StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("X")]),
            StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::lit("ba")]),
        )
    }

    #[test]
    fn concatenation() {
        let a = Assignment::new().with_str("X", "aba");
        let t = StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("X")]);
        assert_eq!(eval_str(&t, &a).unwrap(), "ababa");
        assert_eq!(eval_str(&StrTerm::lit(""), &a).unwrap(), "");
    }

    #[test]
    fn unfixed_parts_example() {
        let a = Assignment::new().with_str("Y", "bb").with_str("Z", "a");
        let t = StrTerm::Concat(vec![
            StrTerm::lit("a"),
            StrTerm::var("Y"),
            StrTerm::lit("b"),
            StrTerm::var("Z"),
            StrTerm::lit("a"),
        ]);
        assert_eq!(eval_str(&t, &a).unwrap(), "abbbaa");
    }

    #[test]
    fn unmapped() {
        assert_eq!(
            eval_str(&StrTerm::var("Q"), &Assignment::new()),
            Err(EvalError::UnmappedVariable("Q".into()))
        );
    }

    #[test]
    fn example_two_and_three() {
        let a = Assignment::new().with_str("X", "aba");
        assert!(eval_formula(&ab_x_eq_x_ba(), &a).unwrap());
        let re = Regex::Concat(vec![
            Regex::Union(vec![Regex::lit("ab"), Regex::lit("ba")]),
            Regex::star(Regex::lit("ab")),
            Regex::lit("a"),
        ]);
        let phi = Formula::and(vec![
            ab_x_eq_x_ba(),
            Formula::in_re(StrTerm::var("X"), re),
            Formula::leq(LenTerm::Len(StrTerm::var("X")), 5),
        ]);
        assert!(eval_formula(&phi, &Assignment::new().with_str("X", "ababa")).unwrap());
        assert!(!eval_formula(&phi, &Assignment::new().with_str("X", "ab")).unwrap());
        assert!(!eval_formula(&phi, &Assignment::new().with_str("X", "abababa")).unwrap());
    }

    #[test]
    fn empty_length() {
        let phi = Formula::leq(LenTerm::Len(StrTerm::var("X")), 0);
        assert!(eval_formula(&phi, &Assignment::new().with_str("X", "")).unwrap());
    }
}
