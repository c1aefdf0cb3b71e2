//! Bounded brute-force satisfiability.
//!
//! String variables (sorted) take every word up to the length bound in
//! shortlex order, then integer variables (sorted) take `0..=int_bound`. The
//! first model in that lexicographic order is returned. Partial assignments
//! are pruned by a three-valued evaluation that looks at known prefixes and
//! suffixes of word equations and at the value ranges of length terms.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::automata::{regex_to_dfa, Dfa};
use crate::semantics::eval_formula;
use crate::syntax::{Alphabet, Assignment, Atom, Formula, LenTerm, Regex, StrTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundedVerdict {
    SatWith(Assignment),
    NoModelUpTo(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("search exceeded {0} nodes")]
    ResourceExhausted(usize),
    #[error("letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
}

pub const DEFAULT_NODE_BUDGET: usize = 200_000_000;

pub fn brute_force_sat(
    phi: &Formula,
    sigma: &Alphabet,
    len_bound: usize,
    int_bound: u64,
) -> Result<BoundedVerdict, OracleError> {
    brute_force_sat_with(phi, sigma, len_bound, int_bound, DEFAULT_NODE_BUDGET)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    False,
    True,
    Unknown,
}

impl Tri {
    fn not(self) -> Tri {
        match self {
            Tri::False => Tri::True,
            Tri::True => Tri::False,
            Tri::Unknown => Tri::Unknown,
        }
    }
}

struct Search<'a> {
    phi: &'a Formula,
    strs: Vec<String>,
    ints: Vec<String>,
    words: Vec<String>,
    len_bound: usize,
    int_bound: u64,
    dfas: HashMap<Regex, Dfa>,
    nodes: AtomicUsize,
    budget: usize,
    exhausted: AtomicBool,
}

/// Values of the variables chosen so far.
#[derive(Clone)]
struct Partial {
    strs: HashMap<String, String>,
    ints: HashMap<String, u64>,
}

enum Seg<'b> {
    Known(&'b str),
    Unknown,
}

fn segments<'b>(t: &'b StrTerm, p: &'b Partial, out: &mut Vec<Seg<'b>>) {
    match t {
        StrTerm::Lit(w) => out.push(Seg::Known(w)),
        StrTerm::Var(v) => match p.strs.get(v) {
            Some(w) => out.push(Seg::Known(w)),
            None => out.push(Seg::Unknown),
        },
        StrTerm::Concat(ps) => ps.iter().for_each(|q| segments(q, p, out)),
    }
}

/// Letters before the first unknown segment, the letters after the last one,
/// the known length and the number of unknown segments.
fn shape(segs: &[Seg]) -> (String, String, usize, usize) {
    let mut prefix = String::new();
    let mut i = 0;
    while let Some(Seg::Known(w)) = segs.get(i) {
        prefix.push_str(w);
        i += 1;
    }
    let mut suffix_parts = Vec::new();
    let mut j = segs.len();
    while j > i {
        match &segs[j - 1] {
            Seg::Known(w) => suffix_parts.push(*w),
            Seg::Unknown => break,
        }
        j -= 1;
    }
    let suffix: String = if i == segs.len() { prefix.clone() } else { suffix_parts.into_iter().rev().collect() };
    let known = segs.iter().map(|s| if let Seg::Known(w) = s { w.chars().count() } else { 0 }).sum();
    let unknown = segs.iter().filter(|s| matches!(s, Seg::Unknown)).count();
    (prefix, suffix, known, unknown)
}

impl Search<'_> {
    fn word_eq(&self, l: &StrTerm, r: &StrTerm, p: &Partial) -> Tri {
        let (mut ls, mut rs) = (Vec::new(), Vec::new());
        segments(l, p, &mut ls);
        segments(r, p, &mut rs);
        let (lp, lsuf, lk, lu) = shape(&ls);
        let (rp, rsuf, rk, ru) = shape(&rs);
        if lu == 0 && ru == 0 {
            return if lp == rp { Tri::True } else { Tri::False };
        }
        if !(lp.starts_with(&rp) || rp.starts_with(&lp)) || !(lsuf.ends_with(&rsuf) || rsuf.ends_with(&lsuf)) {
            return Tri::False;
        }
        let (lmax, rmax) = (lk + lu * self.len_bound, rk + ru * self.len_bound);
        if lk > rmax || rk > lmax {
            return Tri::False;
        }
        Tri::Unknown
    }

    fn len_range(&self, t: &LenTerm, p: &Partial) -> (i128, i128) {
        match t {
            LenTerm::IntConst(n) => (*n as i128, *n as i128),
            LenTerm::IntVar(v) => match p.ints.get(v) {
                Some(n) => (*n as i128, *n as i128),
                None => (0, self.int_bound as i128),
            },
            LenTerm::Len(s) => {
                let mut segs = Vec::new();
                segments(s, p, &mut segs);
                let (_, _, k, u) = shape(&segs);
                (k as i128, (k + u * self.len_bound) as i128)
            }
            LenTerm::Sum(ts) => ts.iter().fold((0, 0), |(lo, hi), (c, t)| {
                let (a, b) = self.len_range(t, p);
                let c = *c as i128;
                if c >= 0 {
                    (lo + c * a, hi + c * b)
                } else {
                    (lo + c * b, hi + c * a)
                }
            }),
        }
    }

    fn atom(&self, a: &Atom, p: &Partial) -> Tri {
        match a {
            Atom::WordEq(l, r) => self.word_eq(l, r, p),
            Atom::LenLeq(t, c) => {
                let (lo, hi) = self.len_range(t, p);
                if lo > *c as i128 {
                    Tri::False
                } else if hi <= *c as i128 {
                    Tri::True
                } else {
                    Tri::Unknown
                }
            }
            Atom::InRe(t, r) => {
                let mut segs = Vec::new();
                segments(t, p, &mut segs);
                if segs.iter().any(|s| matches!(s, Seg::Unknown)) {
                    return Tri::Unknown;
                }
                let w: String = segs.iter().map(|s| if let Seg::Known(w) = s { *w } else { "" }).collect();
                if self.dfas[r].accepts(&w) {
                    Tri::True
                } else {
                    Tri::False
                }
            }
        }
    }

    fn eval(&self, f: &Formula, p: &Partial) -> Tri {
        match f {
            Formula::Atom(a) => self.atom(a, p),
            Formula::Not(g) => self.eval(g, p).not(),
            Formula::And(fs) => {
                let mut out = Tri::True;
                for g in fs {
                    match self.eval(g, p) {
                        Tri::False => return Tri::False,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::True => {}
                    }
                }
                out
            }
            Formula::Or(fs) => {
                let mut out = Tri::False;
                for g in fs {
                    match self.eval(g, p) {
                        Tri::True => return Tri::True,
                        Tri::Unknown => out = Tri::Unknown,
                        Tri::False => {}
                    }
                }
                out
            }
        }
    }

    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !self.exhausted.load(Ordering::Relaxed)
    }

    /// Depth-first search over variable `depth` onwards.
    fn dfs(&self, depth: usize, p: &mut Partial) -> Option<Partial> {
        if !self.tick() {
            return None;
        }
        match self.eval(self.phi, p) {
            Tri::False => return None,
            Tri::True => {
                // every completion is a model; the smallest takes the first values
                let mut m = p.clone();
                for v in &self.strs[depth.min(self.strs.len())..] {
                    m.strs.insert(v.clone(), String::new());
                }
                for v in &self.ints[depth.saturating_sub(self.strs.len())..] {
                    m.ints.insert(v.clone(), 0);
                }
                return Some(m);
            }
            Tri::Unknown if depth == self.strs.len() + self.ints.len() => return None,
            Tri::Unknown => {}
        }
        if depth < self.strs.len() {
            let v = &self.strs[depth];
            for w in &self.words {
                p.strs.insert(v.clone(), w.clone());
                if let Some(m) = self.dfs(depth + 1, p) {
                    return Some(m);
                }
            }
            p.strs.remove(v);
        } else {
            let v = &self.ints[depth - self.strs.len()];
            for n in 0..=self.int_bound {
                p.ints.insert(v.clone(), n);
                if let Some(m) = self.dfs(depth + 1, p) {
                    return Some(m);
                }
            }
            p.ints.remove(v);
        }
        None
    }
}

fn collect_regexes(f: &Formula, out: &mut Vec<Regex>) {
    for a in f.atoms() {
        if let Atom::InRe(_, r) = a {
            out.push(r.clone());
        }
    }
}

/// Like [`brute_force_sat`] with an explicit node budget.
pub fn brute_force_sat_with(
    phi: &Formula,
    sigma: &Alphabet,
    len_bound: usize,
    int_bound: u64,
    budget: usize,
) -> Result<BoundedVerdict, OracleError> {
    if let Some(c) = phi.letters().into_iter().find(|c| !sigma.contains(*c)) {
        return Err(OracleError::LetterOutsideAlphabet(c));
    }
    let (strs, ints) = phi.free_vars();
    let mut regexes = Vec::new();
    collect_regexes(phi, &mut regexes);
    let dfas = regexes
        .into_iter()
        .map(|r| {
            let d = regex_to_dfa(&r, sigma).map_err(|_| OracleError::LetterOutsideAlphabet('?'))?;
            Ok((r, d))
        })
        .collect::<Result<HashMap<_, _>, OracleError>>()?;
    let search = Search {
        phi,
        strs: strs.into_iter().collect(),
        ints: ints.into_iter().collect(),
        words: sigma.words_up_to(len_bound),
        len_bound,
        int_bound,
        dfas,
        nodes: AtomicUsize::new(0),
        budget,
        exhausted: AtomicBool::new(false),
    };
    let root = Partial { strs: HashMap::new(), ints: HashMap::new() };
    let found = if search.strs.is_empty() && search.ints.is_empty() {
        search.dfs(0, &mut root.clone())
    } else if let Some(first) = search.strs.first() {
        search.words.par_iter().find_map_first(|w| {
            let mut p = root.clone();
            p.strs.insert(first.clone(), w.clone());
            search.dfs(1, &mut p)
        })
    } else {
        let first = &search.ints[0];
        (0..=int_bound).into_par_iter().find_map_first(|n| {
            let mut p = root.clone();
            p.ints.insert(first.clone(), n);
            search.dfs(1, &mut p)
        })
    };
    // an exhausted search may have skipped an earlier model
    if search.exhausted.load(Ordering::Relaxed) {
        return Err(OracleError::ResourceExhausted(budget));
    }
    Ok(match found {
        Some(p) => {
            let mut a = Assignment::new();
            for (x, w) in p.strs {
                a.set_str(&x, w);
            }
            for (n, v) in p.ints {
                a.set_int(&n, v);
            }
            assert_eq!(eval_formula(phi, &a), Ok(true), "oracle model fails evaluation");
            BoundedVerdict::SatWith(a)
        }
        None => BoundedVerdict::NoModelUpTo(len_bound),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_x_x_ba() -> Formula {
        Formula::eq(
            StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("X")]),
            StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::lit("ba")]),
        )
    }

    fn len(x: &str) -> LenTerm {
        LenTerm::Len(StrTerm::var(x))
    }

    #[test]
    fn regex_example_first_model() {
        let re = Regex::Concat(vec![
            Regex::Union(vec![Regex::lit("ab"), Regex::lit("ba")]),
            Regex::star(Regex::lit("ab")),
            Regex::lit("a"),
        ]);
        let phi = Formula::and(vec![ab_x_x_ba(), Formula::in_re(StrTerm::var("X"), re), Formula::leq(len("X"), 5)]);
        let v = brute_force_sat(&phi, &Alphabet::default(), 5, 0).unwrap();
        assert_eq!(v, BoundedVerdict::SatWith(Assignment::new().with_str("X", "aba")));
    }

    #[test]
    fn shifted_definition_has_no_model() {
        let phi = Formula::and(vec![
            ab_x_x_ba(),
            Formula::eq(StrTerm::var("X"), StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("Y")])),
            Formula::leq(len("X"), 1),
        ]);
        assert_eq!(brute_force_sat(&phi, &Alphabet::default(), 8, 0).unwrap(), BoundedVerdict::NoModelUpTo(8));
    }

    #[test]
    fn reflexivity() {
        let phi = Formula::eq(StrTerm::var("X"), StrTerm::var("X"));
        assert_eq!(
            brute_force_sat(&phi, &Alphabet::default(), 0, 0).unwrap(),
            BoundedVerdict::SatWith(Assignment::new().with_str("X", ""))
        );
    }

    #[test]
    fn lexicographic_first() {
        // X·Y = "ab" has models (ε,ab), (a,b), (ab,ε); the first X in shortlex wins
        let phi = Formula::eq(StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::var("Y")]), StrTerm::lit("ab"));
        let v = brute_force_sat(&phi, &Alphabet::default(), 3, 0).unwrap();
        assert_eq!(v, BoundedVerdict::SatWith(Assignment::new().with_str("X", "").with_str("Y", "ab")));
    }

    #[test]
    fn integers_and_budget() {
        let phi = Formula::and(vec![
            Formula::not(Formula::leq(LenTerm::IntVar("n".into()), 2)),
            Formula::leq(LenTerm::Sum(vec![(1, len("X")), (-1, LenTerm::IntVar("n".into()))]), -3),
        ]);
        let v = brute_force_sat(&phi, &Alphabet::default(), 2, 5).unwrap();
        assert_eq!(v, BoundedVerdict::SatWith(Assignment::new().with_str("X", "").with_int("n", 3)));
        assert_eq!(
            brute_force_sat_with(
                &Formula::eq(
                    StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::lit("a")]),
                    StrTerm::Concat(vec![StrTerm::lit("b"), StrTerm::var("X")]),
                ),
                &Alphabet::default(),
                6,
                0,
                3
            ),
            Err(OracleError::ResourceExhausted(3))
        );
    }
}
