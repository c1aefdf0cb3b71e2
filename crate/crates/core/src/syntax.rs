//! Abstract syntax of quantifier-free formulas over strings and integers.
//!
//! Two sorts are involved: string terms built from literals, variables and
//! concatenation, and integer terms built from constants, integer variables,
//! `len(·)` and linear sums. Atoms are word equations, `t ≤ c` length atoms
//! and regular membership tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// An ordered, duplicate-free set of letters.
///
/// The declaration order defines the letter order used for shortlex
/// enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<char>);

impl Alphabet {
    /// Builds an alphabet, dropping repeated letters but keeping first-seen order.
    pub fn new(letters: impl IntoIterator<Item = char>) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for c in letters {
            if seen.insert(c) {
                out.push(c);
            }
        }
        Alphabet(out)
    }

    pub fn letters(&self) -> &[char] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.0.iter().position(|&x| x == c)
    }

    /// True when every letter of `w` belongs to the alphabet.
    pub fn accepts_word(&self, w: &str) -> bool {
        w.chars().all(|c| self.contains(c))
    }

    /// All words of length at most `max_len` in shortlex order.
    pub fn words_up_to(&self, max_len: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.0.len());
            for w in &layer {
                for &c in &self.0 {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    /// All words of exactly `len` letters in lexicographic order.
    pub fn words_of_len(&self, len: usize) -> Vec<String> {
        let mut layer = vec![String::new()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(layer.len() * self.0.len());
            for w in &layer {
                for &c in &self.0 {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            layer = next;
        }
        layer
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet(vec!['a', 'b'])
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.0.iter().collect();
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrTerm {
    Lit(String),
    Var(String),
    /// At least two parts.
    Concat(Vec<StrTerm>),
}

impl StrTerm {
    pub fn lit(w: &str) -> Self {
        StrTerm::Lit(w.to_string())
    }

    pub fn var(name: &str) -> Self {
        StrTerm::Var(name.to_string())
    }

    /// Concatenation that collapses to the single part (or the empty
    /// literal) when fewer than two parts are given.
    pub fn concat(mut parts: Vec<StrTerm>) -> Self {
        match parts.len() {
            0 => StrTerm::Lit(String::new()),
            1 => parts.pop().unwrap(),
            _ => StrTerm::Concat(parts),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            StrTerm::Lit(_) => {}
            StrTerm::Var(v) => {
                out.insert(v.clone());
            }
            StrTerm::Concat(ps) => ps.iter().for_each(|p| p.collect_vars(out)),
        }
    }

    /// Flattens nested concatenations into a sequence of letters and variables.
    pub fn symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.push_symbols(&mut out);
        out
    }

    fn push_symbols(&self, out: &mut Vec<Symbol>) {
        match self {
            StrTerm::Lit(w) => out.extend(w.chars().map(Symbol::Letter)),
            StrTerm::Var(v) => out.push(Symbol::Var(v.clone())),
            StrTerm::Concat(ps) => ps.iter().for_each(|p| p.push_symbols(out)),
        }
    }

    /// Rebuilds a term from a flat symbol sequence, grouping letter runs
    /// into literals.
    pub fn from_symbols(syms: &[Symbol]) -> Self {
        let mut parts = Vec::new();
        let mut run = String::new();
        for s in syms {
            match s {
                Symbol::Letter(c) => run.push(*c),
                Symbol::Var(v) => {
                    if !run.is_empty() {
                        parts.push(StrTerm::Lit(std::mem::take(&mut run)));
                    }
                    parts.push(StrTerm::Var(v.clone()));
                }
            }
        }
        if !run.is_empty() {
            parts.push(StrTerm::Lit(run));
        }
        StrTerm::concat(parts)
    }

    pub fn letters(&self, out: &mut BTreeSet<char>) {
        match self {
            StrTerm::Lit(w) => out.extend(w.chars()),
            StrTerm::Var(_) => {}
            StrTerm::Concat(ps) => ps.iter().for_each(|p| p.letters(out)),
        }
    }
}

/// A letter or a string variable inside a flattened string term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Letter(char),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LenTerm {
    IntConst(i64),
    IntVar(String),
    Len(StrTerm),
    Sum(Vec<(i64, LenTerm)>),
}

impl LenTerm {
    pub fn len_of(t: StrTerm) -> Self {
        LenTerm::Len(t)
    }

    /// `-t`, keeping sums flat.
    pub fn negated(&self) -> Self {
        match self {
            LenTerm::IntConst(n) => LenTerm::IntConst(-n),
            LenTerm::Sum(ts) => LenTerm::Sum(ts.iter().map(|(c, t)| (-c, t.clone())).collect()),
            other => LenTerm::Sum(vec![(-1, other.clone())]),
        }
    }

    pub fn collect_vars(&self, strs: &mut BTreeSet<String>, ints: &mut BTreeSet<String>) {
        match self {
            LenTerm::IntConst(_) => {}
            LenTerm::IntVar(v) => {
                ints.insert(v.clone());
            }
            LenTerm::Len(t) => t.collect_vars(strs),
            LenTerm::Sum(ts) => ts.iter().for_each(|(_, t)| t.collect_vars(strs, ints)),
        }
    }
}

/// Regular expressions over letters. `Union(vec![])` denotes the empty language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regex {
    Lit(String),
    Epsilon,
    Concat(Vec<Regex>),
    Union(Vec<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    pub fn lit(w: &str) -> Self {
        Regex::Lit(w.to_string())
    }

    pub fn star(r: Regex) -> Self {
        Regex::Star(Box::new(r))
    }

    pub fn none() -> Self {
        Regex::Union(Vec::new())
    }

    pub fn letters(&self, out: &mut BTreeSet<char>) {
        match self {
            Regex::Lit(w) => out.extend(w.chars()),
            Regex::Epsilon => {}
            Regex::Concat(rs) | Regex::Union(rs) => rs.iter().for_each(|r| r.letters(out)),
            Regex::Star(r) => r.letters(out),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    WordEq(StrTerm, StrTerm),
    /// `t ≤ c`.
    LenLeq(LenTerm, i64),
    InRe(StrTerm, Regex),
}

impl Atom {
    pub fn collect_vars(&self, strs: &mut BTreeSet<String>, ints: &mut BTreeSet<String>) {
        match self {
            Atom::WordEq(l, r) => {
                l.collect_vars(strs);
                r.collect_vars(strs);
            }
            Atom::LenLeq(t, _) => t.collect_vars(strs, ints),
            Atom::InRe(t, _) => t.collect_vars(strs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub fn eq(l: StrTerm, r: StrTerm) -> Self {
        Formula::Atom(Atom::WordEq(l, r))
    }

    pub fn leq(t: LenTerm, c: i64) -> Self {
        Formula::Atom(Atom::LenLeq(t, c))
    }

    pub fn in_re(t: StrTerm, r: Regex) -> Self {
        Formula::Atom(Atom::InRe(t, r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(fs: Vec<Formula>) -> Self {
        Formula::And(fs)
    }

    pub fn or(fs: Vec<Formula>) -> Self {
        Formula::Or(fs)
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.push_atoms(&mut out);
        out
    }

    fn push_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::Atom(a) => out.push(a),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.push_atoms(out)),
            Formula::Not(f) => f.push_atoms(out),
        }
    }

    /// Free string variables and free integer variables.
    pub fn free_vars(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut strs = BTreeSet::new();
        let mut ints = BTreeSet::new();
        for a in self.atoms() {
            a.collect_vars(&mut strs, &mut ints);
        }
        (strs, ints)
    }

    pub fn letters(&self) -> BTreeSet<char> {
        let mut out = BTreeSet::new();
        for a in self.atoms() {
            match a {
                Atom::WordEq(l, r) => {
                    l.letters(&mut out);
                    r.letters(&mut out);
                }
                Atom::LenLeq(t, _) => len_letters(t, &mut out),
                Atom::InRe(t, r) => {
                    t.letters(&mut out);
                    r.letters(&mut out);
                }
            }
        }
        out
    }
}

fn len_letters(t: &LenTerm, out: &mut BTreeSet<char>) {
    match t {
        LenTerm::Len(s) => s.letters(out),
        LenTerm::Sum(ts) => ts.iter().for_each(|(_, t)| len_letters(t, out)),
        _ => {}
    }
}

/// Free variables of `phi` as `(string vars, integer vars)`.
pub fn free_vars(phi: &Formula) -> (BTreeSet<String>, BTreeSet<String>) {
    phi.free_vars()
}

/// Values for string and integer variables. Integers are naturals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub strs: BTreeMap<String, String>,
    pub ints: BTreeMap<String, u64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_str(mut self, var: &str, value: &str) -> Self {
        self.strs.insert(var.to_string(), value.to_string());
        self
    }

    pub fn with_int(mut self, var: &str, value: u64) -> Self {
        self.ints.insert(var.to_string(), value);
        self
    }

    pub fn set_str(&mut self, var: &str, value: String) {
        self.strs.insert(var.to_string(), value);
    }

    pub fn set_int(&mut self, var: &str, value: u64) {
        self.ints.insert(var.to_string(), value);
    }

    pub fn str_value(&self, var: &str) -> Option<&str> {
        self.strs.get(var).map(String::as_str)
    }

    /// True when every string value is a word over `sigma`.
    pub fn is_over(&self, sigma: &Alphabet) -> bool {
        self.strs.values().all(|w| sigma.accepts_word(w))
    }
}
