//! Bounded validity of `∀∃` sentences.
//!
//! Universal values range over all words up to a length bound; existential
//! values range over words no longer than the universal values combined.
//! The first universal tuple, in shortlex order, for which no existential
//! witness exists is reported.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use super::Sentence;
use crate::normalize::{to_dnf, Literal};
use crate::semantics::Evaluator;
use crate::syntax::{Assignment, Atom, Symbol};

pub const DEFAULT_CHECK_BUDGET: usize = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    /// Values of the universals, in declaration order.
    Counterexample(Vec<String>),
    NoCounterexampleUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("search exceeded {0} nodes")]
    ResourceExhausted(usize),
    #[error("variable {0} is not quantified as a string")]
    UnboundVariable(String),
}

pub fn bounded_validity_check(s: &Sentence, max_len: usize) -> Result<CheckOutcome, CheckError> {
    bounded_validity_check_with(s, max_len, DEFAULT_CHECK_BUDGET)
}

struct Lit {
    positive: bool,
    eq: Option<(Vec<Symbol>, Vec<Symbol>)>,
    atom: Atom,
    vars: Vec<String>,
}

struct Ctx<'a> {
    letters: &'a [char],
    nodes: &'a AtomicUsize,
    budget: usize,
}

pub fn bounded_validity_check_with(s: &Sentence, max_len: usize, budget: usize) -> Result<CheckOutcome, CheckError> {
    let (strs, ints) = s.body.free_vars();
    if let Some(v) = ints.into_iter().next() {
        return Err(CheckError::UnboundVariable(v));
    }
    if let Some(v) = strs.iter().find(|v| !s.universals.contains(v) && !s.existentials.contains(v)) {
        return Err(CheckError::UnboundVariable(v.clone()));
    }
    let conjuncts: Vec<Vec<Lit>> = to_dnf(&s.body).into_iter().map(|c| c.into_iter().map(prepare).collect()).collect();

    let words = s.alphabet.words_up_to(max_len);
    let mut tuples: Vec<Vec<String>> = vec![Vec::new()];
    for _ in &s.universals {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                words.iter().map(move |w| {
                    let mut t = t.clone();
                    t.push(w.clone());
                    t
                })
            })
            .collect();
    }

    let nodes = AtomicUsize::new(0);
    let ctx = Ctx { letters: s.alphabet.letters(), nodes: &nodes, budget };
    let found = tuples
        .par_iter()
        .map(|t| -> Result<Option<Vec<String>>, CheckError> {
            let bound = t.iter().map(|w| w.chars().count()).sum();
            let mut assign: HashMap<String, String> = s.universals.iter().cloned().zip(t.iter().cloned()).collect();
            let mut ev = Evaluator::new();
            for c in &conjuncts {
                let idx: Vec<usize> = (0..c.len()).collect();
                if solve(c, idx, &mut assign, bound, &mut ev, &ctx)? {
                    return Ok(None);
                }
            }
            Ok(Some(t.clone()))
        })
        .find_first(|r| !matches!(r, Ok(None)));
    match found {
        None => Ok(CheckOutcome::NoCounterexampleUpTo(max_len)),
        Some(Ok(Some(t))) => Ok(CheckOutcome::Counterexample(t)),
        Some(Err(e)) => Err(e),
        Some(Ok(None)) => unreachable!(),
    }
}

fn prepare(l: Literal) -> Lit {
    let mut strs = Default::default();
    let mut ints = Default::default();
    l.atom.collect_vars(&mut strs, &mut ints);
    let eq = match &l.atom {
        Atom::WordEq(a, b) => Some((a.symbols(), b.symbols())),
        _ => None,
    };
    Lit { positive: l.positive, eq, atom: l.atom, vars: strs.into_iter().collect() }
}

/// Substitutes known values; `None` if some variable is still open.
fn ground(side: &[Symbol], assign: &HashMap<String, String>) -> Option<Vec<char>> {
    let mut out = Vec::new();
    for s in side {
        match s {
            Symbol::Letter(c) => out.push(*c),
            Symbol::Var(v) => out.extend(assign.get(v)?.chars()),
        }
    }
    Some(out)
}

fn partial(side: &[Symbol], assign: &HashMap<String, String>) -> Vec<Symbol> {
    let mut out = Vec::new();
    for s in side {
        match s {
            Symbol::Var(v) => match assign.get(v) {
                Some(w) => out.extend(w.chars().map(Symbol::Letter)),
                None => out.push(s.clone()),
            },
            l => out.push(l.clone()),
        }
    }
    out
}

fn eval(l: &Lit, assign: &HashMap<String, String>, ev: &mut Evaluator) -> bool {
    let value = match &l.eq {
        Some((a, b)) => ground(a, assign) == ground(b, assign),
        None => {
            let mut a = Assignment::new();
            for v in &l.vars {
                a.set_str(v, assign[v].clone());
            }
            ev.eval_atom(&l.atom, &a).expect("all variables assigned")
        }
    };
    value == l.positive
}

fn tick(ctx: &Ctx) -> Result<(), CheckError> {
    if ctx.nodes.fetch_add(1, Ordering::Relaxed) >= ctx.budget {
        Err(CheckError::ResourceExhausted(ctx.budget))
    } else {
        Ok(())
    }
}

fn solve(
    lits: &[Lit],
    idx: Vec<usize>,
    assign: &mut HashMap<String, String>,
    bound: usize,
    ev: &mut Evaluator,
    ctx: &Ctx,
) -> Result<bool, CheckError> {
    tick(ctx)?;
    let mut open = Vec::new();
    for i in idx {
        if lits[i].vars.iter().all(|v| assign.contains_key(v)) {
            if !eval(&lits[i], assign, ev) {
                return Ok(false);
            }
        } else {
            open.push(i);
        }
    }
    if open.is_empty() {
        return Ok(true);
    }

    let pick = open.iter().find_map(|&i| {
        let (a, b) = lits[i].eq.as_ref().filter(|_| lits[i].positive)?;
        match (ground(a, assign), ground(b, assign)) {
            (Some(g), None) => Some((i, g, partial(b, assign))),
            (None, Some(g)) => Some((i, g, partial(a, assign))),
            _ => None,
        }
    });
    if let Some((i, g, pat)) = pick {
        let mut matches = Vec::new();
        let mut local = HashMap::new();
        collect_matches(&g, &pat, bound, &mut local, &mut Vec::new(), &mut matches);
        let rest: Vec<usize> = open.iter().copied().filter(|&j| j != i).collect();
        for m in matches {
            for (v, w) in &m {
                assign.insert(v.clone(), w.clone());
            }
            let ok = solve(lits, rest.clone(), assign, bound, ev, ctx)?;
            for (v, _) in &m {
                assign.remove(v);
            }
            if ok {
                return Ok(true);
            }
        }
        return Ok(false);
    }

    let v = open.iter().flat_map(|&i| lits[i].vars.iter()).find(|v| !assign.contains_key(*v)).unwrap().clone();
    let words = crate::syntax::Alphabet::new(ctx.letters.iter().copied()).words_up_to(bound);
    for w in words {
        assign.insert(v.clone(), w);
        let ok = solve(lits, open.clone(), assign, bound, ev, ctx)?;
        if ok {
            assign.remove(&v);
            return Ok(true);
        }
    }
    assign.remove(&v);
    Ok(false)
}

fn collect_matches(
    g: &[char],
    pat: &[Symbol],
    bound: usize,
    local: &mut HashMap<String, String>,
    cur: &mut Vec<(String, String)>,
    out: &mut Vec<Vec<(String, String)>>,
) {
    let Some((first, rest)) = pat.split_first() else {
        if g.is_empty() {
            out.push(cur.clone());
        }
        return;
    };
    let fixed = rest.iter().filter(|s| matches!(s, Symbol::Letter(_))).count();
    if fixed > g.len() {
        return;
    }
    match first {
        Symbol::Letter(c) => {
            if g.first() == Some(c) {
                collect_matches(&g[1..], rest, bound, local, cur, out);
            }
        }
        Symbol::Var(v) => {
            if let Some(w) = local.get(v) {
                let w: Vec<char> = w.chars().collect();
                if g.starts_with(&w) {
                    collect_matches(&g[w.len()..], rest, bound, local, cur, out);
                }
                return;
            }
            for k in 0..=(g.len() - fixed).min(bound) {
                let w: String = g[..k].iter().collect();
                local.insert(v.clone(), w.clone());
                cur.push((v.clone(), w));
                collect_matches(&g[k..], rest, bound, local, cur, out);
                cur.pop();
                local.remove(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{encode, encode_history, encode_with_negations, positivize, simulate, zoo, SentenceLetters, SimOutcome};
    use super::*;
    use crate::oracle::{brute_force_sat, BoundedVerdict};
    use crate::syntax::{Alphabet, Formula, StrTerm};

    #[test]
    fn reduction_matches_simulation() {
        for (name, m, w) in zoo::all() {
            let s = encode(&m, w).unwrap();
            let letters = SentenceLetters::new(&m, w).unwrap();
            match simulate(&m, w, 50).unwrap() {
                SimOutcome::Accepted(h) => {
                    let hist = encode_history(&letters, &h);
                    let n = hist.chars().count();
                    assert_eq!(bounded_validity_check(&s, n).unwrap(), CheckOutcome::Counterexample(vec![hist]), "{name}");
                }
                _ => assert_eq!(bounded_validity_check(&s, 3).unwrap(), CheckOutcome::NoCounterexampleUpTo(3), "{name}"),
            }
        }
    }

    #[test]
    fn positivized_negation_of_letter() {
        let s = Sentence {
            alphabet: Alphabet::new(['a', 'b']),
            universals: vec!["X".into()],
            existentials: vec![],
            body: Formula::not(Formula::eq(StrTerm::var("X"), StrTerm::lit("a"))),
        };
        let p = positivize(&s);
        assert!(p.is_negation_free());
        let sigma = Alphabet::new(['a', 'b']);
        for w in sigma.words_up_to(2) {
            let pinned = Formula::And(vec![Formula::eq(StrTerm::var("X"), StrTerm::lit(&w)), p.body.clone()]);
            let model = brute_force_sat(&pinned, &sigma, 2, 0).unwrap();
            assert_eq!(matches!(model, BoundedVerdict::SatWith(_)), w != "a", "{w}");
        }
        // X ranges over words up to length 2; the only counterexample is "a"
        assert_eq!(bounded_validity_check(&p, 2).unwrap(), CheckOutcome::Counterexample(vec!["a".into()]));
    }

    #[test]
    fn raw_and_positivized_agree() {
        for (name, m, w) in zoo::all() {
            let raw = encode_with_negations(&m, w).unwrap();
            let pos = positivize(&raw);
            for n in 0..=2 {
                assert_eq!(bounded_validity_check(&raw, n), bounded_validity_check(&pos, n), "{name} {n}");
            }
        }
    }

    #[test]
    fn budget() {
        let m = zoo::inc_dec();
        let s = encode(&m, "0").unwrap();
        assert_eq!(bounded_validity_check_with(&s, 3, 10), Err(CheckError::ResourceExhausted(10)));
    }
}
