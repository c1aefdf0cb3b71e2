//! The sentence `∀S ∃S1…S4 U V. θ` whose counterexamples are exactly the
//! accepting computation histories of a machine on a fixed input.
//!
//! An ID `(q, w, n, c1, c2)` is written as one letter for the pair `(q, n)`
//! followed by `b^c1 c^c2`; a history is the concatenation of its IDs.
//! `θ` is a disjunction saying that `S` does not start with the initial ID,
//! does not end with a final one, is malformed, or contains a bad step.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{positions, step, InSym, MachineId, Move, Tape, Top, TwoCounterMachine};
use crate::frontend::print_formula;
use crate::normalize::FreshNames;
use crate::syntax::{Alphabet, Formula, StrTerm};

pub const DEFAULT_ENCODING_CAP: usize = 100_000;

const MARK1: char = 'b';
const MARK2: char = 'c';

/// Letters available for `(state, position)` pairs. Excludes the counter
/// marks and characters that need escaping in the text format.
fn letter_pool() -> Vec<char> {
    let mut pool: Vec<char> = ('A'..='Z').collect();
    pool.extend(('a'..='z').filter(|&c| c != MARK1 && c != MARK2));
    pool.extend('0'..='9');
    pool.extend("!#$%&*+,-./:<=>?@[]^_`{|}~".chars());
    pool
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("encoding needs {needed} letters or strings, the cap is {cap}")]
    EncodingCapExceeded { needed: usize, cap: usize },
    #[error("input letter {0:?} is not in the input alphabet")]
    UnknownLetter(char),
}

/// Letter assignment for one machine and input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceLetters {
    ids: BTreeMap<(String, usize), char>,
    initial: char,
    finals: BTreeSet<char>,
    alphabet: Alphabet,
}

impl SentenceLetters {
    pub fn new(m: &TwoCounterMachine, w: &str) -> Result<Self, EncodeError> {
        if let Some(c) = w.chars().find(|c| !m.input_alphabet.contains(c)) {
            return Err(EncodeError::UnknownLetter(c));
        }
        let pool = letter_pool();
        let npos = positions(w);
        let needed = m.states.len() * npos;
        if needed > pool.len() {
            return Err(EncodeError::EncodingCapExceeded { needed, cap: pool.len() });
        }
        let mut ids = BTreeMap::new();
        let mut letters = Vec::new();
        for (i, q) in m.states.iter().enumerate() {
            for n in 0..npos {
                let c = pool[i * npos + n];
                ids.insert((q.clone(), n), c);
                letters.push(c);
            }
        }
        let initial = ids[&(m.initial.clone(), 0)];
        let finals = m.finals.iter().map(|q| ids[&(q.clone(), 0)]).collect();
        letters.extend([MARK1, MARK2]);
        Ok(SentenceLetters { ids, initial, finals, alphabet: Alphabet::new(letters) })
    }

    pub fn letter(&self, state: &str, head: usize) -> char {
        self.ids[&(state.to_string(), head)]
    }

    pub fn id_letters(&self) -> impl Iterator<Item = char> + '_ {
        self.ids.values().copied()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Prefixes ruling out a correct initial ID.
    pub fn not_init(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.alphabet.letters().iter().filter(|&&c| c != self.initial).map(|c| c.to_string()).collect();
        out.push(format!("{}{MARK1}", self.initial));
        out.push(format!("{}{MARK2}", self.initial));
        out
    }

    /// Last letters ruling out a final ID at the end.
    pub fn not_final(&self) -> Vec<char> {
        self.alphabet.letters().iter().copied().filter(|c| !self.finals.contains(c)).collect()
    }
}

/// A prenex sentence `∀ universals ∃ existentials. body` over string variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub alphabet: Alphabet,
    pub universals: Vec<String>,
    pub existentials: Vec<String>,
    pub body: Formula,
}

impl Sentence {
    pub fn var_count(&self) -> usize {
        self.universals.len() + self.existentials.len()
    }

    pub fn is_negation_free(&self) -> bool {
        fn free(f: &Formula) -> bool {
            match f {
                Formula::Atom(_) => true,
                Formula::Not(_) => false,
                Formula::And(fs) | Formula::Or(fs) => fs.iter().all(free),
            }
        }
        free(&self.body)
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let decls = |vs: &[String]| vs.iter().map(|v| format!("({v} String)")).collect::<Vec<_>>().join(" ");
        writeln!(f, "(set-alphabet \"{}\")", self.alphabet)?;
        write!(
            f,
            "(forall ({}) (exists ({}) {}))",
            decls(&self.universals),
            decls(&self.existentials),
            print_formula(&self.body)
        )
    }
}

/// The word encoding a sequence of IDs.
pub fn encode_history(letters: &SentenceLetters, history: &[MachineId]) -> String {
    let mut out = String::new();
    for id in history {
        out.push(letters.letter(&id.state, id.head));
        out.extend(std::iter::repeat_n(MARK1, id.counter1 as usize));
        out.extend(std::iter::repeat_n(MARK2, id.counter2 as usize));
    }
    out
}

fn var(v: &str) -> StrTerm {
    StrTerm::var(v)
}

fn ch(c: char) -> StrTerm {
    StrTerm::Lit(c.to_string())
}

fn eq(l: Vec<StrTerm>, r: Vec<StrTerm>) -> Formula {
    Formula::eq(StrTerm::concat(l), StrTerm::concat(r))
}

fn s_is(parts: Vec<StrTerm>) -> Formula {
    eq(vec![var("S")], parts)
}

fn cat(parts: &[&[StrTerm]]) -> Vec<StrTerm> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

fn clause(mut atoms: Vec<Formula>) -> Formula {
    if atoms.len() == 1 {
        atoms.pop().unwrap()
    } else {
        Formula::And(atoms)
    }
}

pub fn encode(m: &TwoCounterMachine, w: &str) -> Result<Sentence, EncodeError> {
    build(m, w, false, DEFAULT_ENCODING_CAP)
}

/// Like [`encode`], but a wrong successor letter is stated as
/// `¬(τ·S4 = σ'·S4)` over every `τ` instead of listing the `τ ≠ σ'`.
pub fn encode_with_negations(m: &TwoCounterMachine, w: &str) -> Result<Sentence, EncodeError> {
    build(m, w, true, DEFAULT_ENCODING_CAP)
}

fn build(m: &TwoCounterMachine, w: &str, negated: bool, cap: usize) -> Result<Sentence, EncodeError> {
    let letters = SentenceLetters::new(m, w)?;
    let not_init = letters.not_init();
    let not_final = letters.not_final();
    let needed = not_init.len() + not_final.len();
    if needed > cap {
        return Err(EncodeError::EncodingCapExceeded { needed, cap });
    }
    let sigma0: Vec<char> = letters.id_letters().collect();
    let (s1, s2, s3, s4) = (var("S1"), var("S2"), var("S3"), var("S4"));
    let (u, v) = (var("U"), var("V"));
    let (b, c) = (ch(MARK1), ch(MARK2));
    let mut clauses: Vec<Formula> = Vec::new();

    clauses.push(eq(vec![var("S")], vec![]));
    clauses.push(s_is(vec![s1.clone(), c.clone(), b.clone(), s4.clone()]));
    for p in &not_init {
        clauses.push(s_is(vec![StrTerm::lit(p), s4.clone()]));
    }
    for &e in &not_final {
        clauses.push(s_is(vec![s1.clone(), ch(e)]));
    }

    let npos = positions(w);
    let input: Vec<char> = w.chars().collect();
    for q in &m.states {
        for n in 0..npos {
            let sigma = ch(letters.letter(q, n));
            let sym = input.get(n).map_or(InSym::End, |&a| InSym::Letter(a));
            for (t1, t2) in [(Top::Zero, Top::Zero), (Top::Zero, Top::Mark), (Top::Mark, Top::Zero), (Top::Mark, Top::Mark)] {
                let a: Vec<StrTerm> = if t1 == Top::Mark { vec![b.clone(), u.clone()] } else { vec![] };
                let bb: Vec<StrTerm> = if t2 == Top::Mark { vec![c.clone(), v.clone()] } else { vec![] };
                let mut side = Vec::new();
                if t1 == Top::Mark {
                    side.push(eq(vec![u.clone(), b.clone()], vec![b.clone(), u.clone()]));
                }
                if t2 == Top::Mark {
                    side.push(eq(vec![v.clone(), c.clone()], vec![c.clone(), v.clone()]));
                }
                let prefix = cat(&[&[s1.clone(), sigma.clone()], &a, &bb]);
                let with = |mut atoms: Vec<Formula>| {
                    atoms.extend(side.iter().cloned());
                    clause(atoms)
                };

                let Some(action) = m.delta.get(&(q.clone(), sym, t1, t2)) else {
                    for &tau in &sigma0 {
                        clauses.push(with(vec![s_is(cat(&[&prefix, &[ch(tau), s4.clone()]]))]));
                    }
                    continue;
                };
                let probe = MachineId {
                    state: q.clone(),
                    input: w.to_string(),
                    head: n,
                    counter1: u64::from(t1 == Top::Mark),
                    counter2: u64::from(t2 == Top::Mark),
                };
                let next = step(&probe, action);
                let sigma_next = letters.letter(&next.state, next.head);
                let a_next: Vec<StrTerm> = match (action.1, action.2, t1) {
                    (Tape::Stor1, Move::R, _) => cat(&[std::slice::from_ref(&b), &a]),
                    (Tape::Stor1, Move::L, Top::Mark) => vec![u.clone()],
                    (Tape::Stor1, Move::L, Top::Zero) => vec![],
                    _ => a.clone(),
                };
                let b_next: Vec<StrTerm> = match (action.1, action.2, t2) {
                    (Tape::Stor2, Move::R, _) => cat(&[std::slice::from_ref(&c), &bb]),
                    (Tape::Stor2, Move::L, Top::Mark) => vec![v.clone()],
                    (Tape::Stor2, Move::L, Top::Zero) => vec![],
                    _ => bb.clone(),
                };
                let head = cat(&[&prefix, &[ch(sigma_next)]]);

                for &tau in &sigma0 {
                    if negated {
                        let wrong = Formula::not(eq(vec![ch(tau), s4.clone()], vec![ch(sigma_next), s4.clone()]));
                        clauses.push(with(vec![s_is(cat(&[&prefix, &[ch(tau), s4.clone()]])), wrong]));
                    } else if tau != sigma_next {
                        clauses.push(with(vec![s_is(cat(&[&prefix, &[ch(tau), s4.clone()]]))]));
                    }
                }
                // more marks than expected
                clauses.push(with(vec![s_is(cat(&[&head, &a_next, &[b.clone(), s4.clone()]]))]));
                clauses.push(with(vec![s_is(cat(&[&head, &a_next, &b_next, &[c.clone(), s4.clone()]]))]));
                // fewer marks than expected: the run stops early inside A' or B'
                let mut ends: Vec<Vec<StrTerm>> = sigma0.iter().map(|&t| vec![ch(t), s4.clone()]).collect();
                ends.push(vec![]);
                if !a_next.is_empty() {
                    let short = eq(a_next.clone(), vec![s2.clone(), b.clone(), s3.clone()]);
                    let mut tails = ends.clone();
                    tails.push(vec![c.clone(), s4.clone()]);
                    for tail in tails {
                        clauses.push(with(vec![short.clone(), s_is(cat(&[&head, std::slice::from_ref(&s2), &tail]))]));
                    }
                }
                if !b_next.is_empty() {
                    let short = eq(b_next.clone(), vec![s2.clone(), c.clone(), s3.clone()]);
                    for tail in &ends {
                        clauses.push(with(vec![short.clone(), s_is(cat(&[&head, &a_next, std::slice::from_ref(&s2), tail]))]));
                    }
                }
            }
        }
    }

    Ok(Sentence {
        alphabet: letters.alphabet().clone(),
        universals: vec!["S".into()],
        existentials: ["S1", "S2", "S3", "S4", "U", "V"].iter().map(|s| s.to_string()).collect(),
        body: Formula::Or(clauses),
    })
}

/// Removes negation from the body. Negated word equations `¬(s = t)`
/// become `s = t·x·P ∨ t = s·x·P ∨ (s = P·x·Q ∧ t = P·y·R)` over letters
/// `x ≠ y`, with `P, Q, R` added as existentials. Names are shared between
/// top-level disjuncts. Other negated atoms are left in place.
pub fn positivize(s: &Sentence) -> Sentence {
    let base = FreshNames::new(s.universals.iter().chain(&s.existentials).cloned());
    let mut added: BTreeSet<String> = BTreeSet::new();
    let letters = s.alphabet.letters();
    let mut one = |f: &Formula| {
        let mut fresh = base.clone();
        let mut used = Vec::new();
        let out = nnf(f, false, letters, &mut fresh, &mut used);
        added.extend(used);
        out
    };
    let body = match &s.body {
        Formula::Or(ds) => Formula::Or(ds.iter().map(&mut one).collect()),
        other => one(other),
    };
    let mut existentials = s.existentials.clone();
    existentials.extend(added);
    Sentence { alphabet: s.alphabet.clone(), universals: s.universals.clone(), existentials, body }
}

fn nnf(f: &Formula, neg: bool, sigma: &[char], fresh: &mut FreshNames, used: &mut Vec<String>) -> Formula {
    match f {
        Formula::Atom(crate::syntax::Atom::WordEq(l, r)) if neg => {
            let mut name = |p: &str| {
                let n = fresh.fresh(p);
                used.push(n.clone());
                var(&n)
            };
            let (p, q, rr) = (name("P"), name("Q"), name("R"));
            let mut ds = Vec::new();
            for &x in sigma {
                ds.push(eq(vec![l.clone()], vec![r.clone(), ch(x), p.clone()]));
                ds.push(eq(vec![r.clone()], vec![l.clone(), ch(x), p.clone()]));
            }
            for &x in sigma {
                for &y in sigma {
                    if x != y {
                        ds.push(Formula::And(vec![
                            eq(vec![l.clone()], vec![p.clone(), ch(x), q.clone()]),
                            eq(vec![r.clone()], vec![p.clone(), ch(y), rr.clone()]),
                        ]));
                    }
                }
            }
            Formula::Or(ds)
        }
        Formula::Atom(_) => {
            if neg {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Formula::Not(g) => nnf(g, !neg, sigma, fresh, used),
        Formula::And(fs) => {
            let parts = fs.iter().map(|g| nnf(g, neg, sigma, fresh, used)).collect();
            if neg {
                Formula::Or(parts)
            } else {
                Formula::And(parts)
            }
        }
        Formula::Or(fs) => {
            let parts = fs.iter().map(|g| nnf(g, neg, sigma, fresh, used)).collect();
            if neg {
                Formula::And(parts)
            } else {
                Formula::Or(parts)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::zoo;
    use super::*;

    #[test]
    fn seven_variables_and_no_negation() {
        for (_, m, w) in zoo::all() {
            let s = encode(&m, w).unwrap();
            assert_eq!(s.var_count(), 7);
            assert!(s.is_negation_free());
            assert!(!encode_with_negations(&m, w).unwrap().is_negation_free());
        }
    }

    #[test]
    fn not_init_excludes_only_the_initial_letter() {
        let m = zoo::right_left();
        let letters = SentenceLetters::new(&m, "01").unwrap();
        let init = letters.letter("q0", 0);
        let singles: BTreeSet<char> =
            letters.not_init().iter().filter(|p| p.chars().count() == 1).map(|p| p.chars().next().unwrap()).collect();
        let expected: BTreeSet<char> = letters.alphabet().letters().iter().copied().filter(|&c| c != init).collect();
        assert_eq!(singles, expected);
    }

    #[test]
    fn history_word() {
        let m = zoo::inc_dec();
        let letters = SentenceLetters::new(&m, "0").unwrap();
        let super::super::SimOutcome::Accepted(h) = super::super::simulate(&m, "0", 10).unwrap() else { panic!() };
        let word = encode_history(&letters, &h);
        let expect: String =
            [letters.letter("q0", 0), letters.letter("q1", 0), 'b', letters.letter("q2", 0)].iter().collect();
        assert_eq!(word, expect);
    }

    #[test]
    fn too_many_ids() {
        let states: Vec<String> = (0..50).map(|i| format!("q{i}")).collect();
        let m = TwoCounterMachine::new(states, vec!['0', '1'], "q0", [], vec![]).unwrap();
        assert!(matches!(encode(&m, "01"), Err(EncodeError::EncodingCapExceeded { .. })));
    }

    #[test]
    fn positivize_keeps_variables_apart_within_a_disjunct() {
        let f = Formula::And(vec![
            Formula::not(eq(vec![var("X")], vec![ch('a')])),
            Formula::not(eq(vec![var("X")], vec![ch('b')])),
        ]);
        let s = Sentence { alphabet: Alphabet::default(), universals: vec!["X".into()], existentials: vec![], body: f };
        let p = positivize(&s);
        assert!(p.is_negation_free());
        assert_eq!(p.existentials.len(), 6);
    }
}
