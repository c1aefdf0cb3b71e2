//! Disjunctive normal form and elimination of negated atoms.

use std::collections::BTreeSet;

use crate::automata::{complement_regex, AutomataError};
use crate::syntax::{Alphabet, Atom, Formula, LenTerm, StrTerm};

/// A possibly negated atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn to_formula(&self) -> Formula {
        let f = Formula::Atom(self.atom.clone());
        if self.positive {
            f
        } else {
            Formula::not(f)
        }
    }
}

pub type Conjunct = Vec<Literal>;

/// Expands `phi` into a list of conjunctions of literals whose disjunction
/// is equivalent to `phi`.
pub fn to_dnf(phi: &Formula) -> Vec<Conjunct> {
    dnf(phi, true)
}

fn dnf(phi: &Formula, positive: bool) -> Vec<Conjunct> {
    match (phi, positive) {
        (Formula::Atom(a), p) => vec![vec![Literal { positive: p, atom: a.clone() }]],
        (Formula::Not(f), p) => dnf(f, !p),
        (Formula::And(fs), true) | (Formula::Or(fs), false) => {
            let mut acc: Vec<Conjunct> = vec![Vec::new()];
            for f in fs {
                let part = dnf(f, positive);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for b in &part {
                        let mut c = a.clone();
                        c.extend(b.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
        (Formula::Or(fs), true) | (Formula::And(fs), false) => {
            fs.iter().flat_map(|f| dnf(f, positive)).collect()
        }
    }
}

/// Reassembles a DNF as an `Or` of `And`s.
pub fn dnf_to_formula(dnf: &[Conjunct]) -> Formula {
    Formula::Or(
        dnf.iter()
            .map(|c| Formula::And(c.iter().map(Literal::to_formula).collect()))
            .collect(),
    )
}

/// Hands out variable names that collide with nothing already in use.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    used: BTreeSet<String>,
    counter: usize,
}

impl FreshNames {
    pub fn new(used: impl IntoIterator<Item = String>) -> Self {
        FreshNames { used: used.into_iter().collect(), counter: 0 }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn fresh(&mut self, prefix: &str) -> String {
        loop {
            self.counter += 1;
            let name = format!("{prefix}{}", self.counter);
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// Rewrites a conjunction with negated atoms into an equisatisfiable
/// disjunction of negation-free conjunctions.
///
/// * `¬(t ≤ c)` becomes `-t ≤ -c-1`.
/// * `¬(t ∈ R)` becomes `t ∈ R'` where `R'` is the complement of `R`
///   within `sigma*`.
/// * `¬(s = t)` becomes `len(s) < len(t) ∨ len(t) < len(s) ∨
///   ⋁_{a≠b} (s = P·a·U ∧ t = P·b·V)` with fresh `P, U, V`.
pub fn eliminate_negations(
    c: &Conjunct,
    sigma: &Alphabet,
    fresh: &mut FreshNames,
) -> Result<Vec<Vec<Atom>>, AutomataError> {
    let mut acc: Vec<Vec<Atom>> = vec![Vec::new()];
    for lit in c {
        let options: Vec<Vec<Atom>> = if lit.positive {
            vec![vec![lit.atom.clone()]]
        } else {
            negate_atom(&lit.atom, sigma, fresh)?
        };
        let mut next = Vec::with_capacity(acc.len() * options.len());
        for a in &acc {
            for o in &options {
                let mut v = a.clone();
                v.extend(o.iter().cloned());
                next.push(v);
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn negate_atom(atom: &Atom, sigma: &Alphabet, fresh: &mut FreshNames) -> Result<Vec<Vec<Atom>>, AutomataError> {
    Ok(match atom {
        Atom::LenLeq(t, c) => vec![vec![Atom::LenLeq(t.negated(), -c - 1)]],
        Atom::InRe(t, r) => vec![vec![Atom::InRe(t.clone(), complement_regex(r, sigma)?)]],
        Atom::WordEq(s, t) => {
            let diff = |x: &StrTerm, y: &StrTerm| {
                Atom::LenLeq(
                    LenTerm::Sum(vec![(1, LenTerm::Len(x.clone())), (-1, LenTerm::Len(y.clone()))]),
                    -1,
                )
            };
            let mut out = vec![vec![diff(s, t)], vec![diff(t, s)]];
            let p = fresh.fresh("P");
            let u = fresh.fresh("U");
            let v = fresh.fresh("V");
            for &a in sigma.letters() {
                for &b in sigma.letters() {
                    if a == b {
                        continue;
                    }
                    let left = StrTerm::Concat(vec![
                        StrTerm::Var(p.clone()),
                        StrTerm::Lit(a.to_string()),
                        StrTerm::Var(u.clone()),
                    ]);
                    let right = StrTerm::Concat(vec![
                        StrTerm::Var(p.clone()),
                        StrTerm::Lit(b.to_string()),
                        StrTerm::Var(v.clone()),
                    ]);
                    out.push(vec![Atom::WordEq(s.clone(), left), Atom::WordEq(t.clone(), right)]);
                }
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Regex;

    fn atom(name: &str) -> Atom {
        Atom::LenLeq(LenTerm::Len(StrTerm::var(name)), 1)
    }

    fn f(name: &str) -> Formula {
        Formula::Atom(atom(name))
    }

    #[test]
    fn distributivity() {
        let phi = Formula::and(vec![f("A"), Formula::or(vec![f("B"), f("C")])]);
        assert_eq!(
            to_dnf(&phi),
            vec![
                vec![Literal::pos(atom("A")), Literal::pos(atom("B"))],
                vec![Literal::pos(atom("A")), Literal::pos(atom("C"))],
            ]
        );
    }

    #[test]
    fn de_morgan() {
        let phi = Formula::not(Formula::or(vec![f("A"), f("B")]));
        assert_eq!(to_dnf(&phi), vec![vec![Literal::neg(atom("A")), Literal::neg(atom("B"))]]);
    }

    #[test]
    fn single_atom() {
        assert_eq!(to_dnf(&f("A")), vec![vec![Literal::pos(atom("A"))]]);
    }

    #[test]
    fn empty_connectives() {
        assert_eq!(to_dnf(&Formula::And(vec![])), vec![Vec::<Literal>::new()]);
        assert!(to_dnf(&Formula::Or(vec![])).is_empty());
        assert!(to_dnf(&Formula::not(Formula::And(vec![]))).is_empty());
    }

    #[test]
    fn negated_length_atom() {
        let lit = Literal::neg(Atom::LenLeq(LenTerm::Len(StrTerm::var("X")), 3));
        let out = eliminate_negations(&vec![lit], &Alphabet::default(), &mut FreshNames::default()).unwrap();
        assert_eq!(
            out,
            vec![vec![Atom::LenLeq(LenTerm::Sum(vec![(-1, LenTerm::Len(StrTerm::var("X")))]), -4)]]
        );
    }

    #[test]
    fn negated_regex_uses_complement() {
        let lit = Literal::neg(Atom::InRe(StrTerm::var("X"), Regex::star(Regex::lit("a"))));
        let out = eliminate_negations(&vec![lit], &Alphabet::default(), &mut FreshNames::default()).unwrap();
        assert_eq!(out.len(), 1);
        let Atom::InRe(_, r) = &out[0][0] else { panic!() };
        let mut ev = crate::semantics::Evaluator::new();
        for w in Alphabet::default().words_up_to(4) {
            assert_eq!(ev.member(&w, r), w.contains('b'), "{w}");
        }
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let mut fresh = FreshNames::new(["P1".to_string(), "U2".to_string()]);
        assert_eq!(fresh.fresh("P"), "P2");
        assert_eq!(fresh.fresh("U"), "U3");
    }
}
