//! Rewriting word-equation conjunctions into solved forms.
//!
//! The supported fragment is defined by the rules below, tried in order on
//! the pending equations of a branch:
//!
//! * R1/R2: strip identical leading and trailing items; a clash of two
//!   distinct letters, or a letter-count mismatch between sides with the same
//!   variables, refutes the branch.
//! * empty side: `ε = α` forces every variable of `α` to `ε` and every
//!   parameter to 0.
//! * R3: `X = t` with `X ∉ t` is recorded and substituted everywhere.
//! * self reference: `X = α·X·β` forces `α`, `β` (or everything) empty.
//! * constant split: `w = α` with `w` a constant and `α` free of powers is
//!   solved by enumerating the finitely many matches.
//! * R4: `u·X = X·v` yields `X = (pq)^i·p` for every `u = pq`, `v = qp`, `q ≠ ε`.
//! * unrolling: a power facing a letter splits into `i = 0` and `i = j+1`.
//! * R5: `X·u = v·Y` yields the finitely many short solutions plus
//!   `X = v·W, Y = W·u` for a fresh `W`.
//!
//! Variables still free when no equation remains become unfixed parts (R6).

use std::collections::{BTreeMap, BTreeSet};

use crate::normalize::FreshNames;
use crate::syntax::{StrTerm, Symbol};

use super::{Block, ParamId, ParamWord, PartId, SolvedForm};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Piece {
    Ch(char),
    Var(String),
    Pow(String, ParamId),
}

type Side = Vec<Piece>;

#[derive(Debug, Clone)]
struct State {
    pending: Vec<(Side, Side)>,
    solved: BTreeMap<String, Side>,
    rounds: usize,
}

/// Which rule produced a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Strip,
    EmptySide,
    Definition,
    SelfReference,
    ConstantSplit,
    Commutation,
    Unroll,
    Straddle,
}

/// `(variables in pending equations, equations with variables on both
/// sides, pending items)`, compared lexicographically.
pub type Measure = (usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub rule: Rule,
    pub before: Measure,
    pub after: Vec<Measure>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Disjunction of solved forms equivalent to the input.
    Forms(Vec<SolvedForm>),
    Unsat,
    NoSolvedFormInFragment,
}

#[derive(Debug, Clone, Copy)]
pub struct RewriteConfig {
    /// Rounds of straddle splitting or unrolling allowed on one branch.
    pub max_rounds: usize,
    /// Total branch states explored before giving up.
    pub max_states: usize,
    /// Matches enumerated by one constant split.
    pub max_matches: usize,
}

impl Default for RewriteConfig {
    fn default() -> Self {
        RewriteConfig { max_rounds: 8, max_states: 100_000, max_matches: 10_000 }
    }
}

fn side_of(t: &StrTerm) -> Side {
    t.symbols()
        .into_iter()
        .map(|s| match s {
            Symbol::Letter(c) => Piece::Ch(c),
            Symbol::Var(v) => Piece::Var(v),
        })
        .collect()
}

fn has_var(s: &Side) -> bool {
    s.iter().any(|p| matches!(p, Piece::Var(_)))
}

fn has_pow(s: &Side) -> bool {
    s.iter().any(|p| matches!(p, Piece::Pow(..)))
}

fn all_chars(s: &Side) -> Option<Vec<char>> {
    s.iter()
        .map(|p| match p {
            Piece::Ch(c) => Some(*c),
            _ => None,
        })
        .collect()
}

fn measure(st: &State) -> Measure {
    let mut vars = BTreeSet::new();
    let mut two_sided = 0;
    let mut size = 0;
    for (l, r) in &st.pending {
        for p in l.iter().chain(r.iter()) {
            if let Piece::Var(v) = p {
                vars.insert(v.clone());
            }
        }
        if has_var(l) && has_var(r) {
            two_sided += 1;
        }
        size += l.len() + r.len();
    }
    (vars.len(), two_sided, size)
}

enum Step {
    Done,
    Unsat,
    Stuck,
    Branch(Rule, Vec<State>),
}

struct Engine<'a> {
    config: RewriteConfig,
    fresh: FreshNames,
    next_param: u32,
    trace: Option<&'a mut Vec<StepRecord>>,
}

impl State {
    /// Replaces variables and parameters everywhere.
    fn substitute(&mut self, vars: &BTreeMap<String, Side>, params: &BTreeMap<ParamId, Side>) {
        let rewrite = |s: &Side| -> Side {
            let mut out = Vec::with_capacity(s.len());
            for p in s {
                match p {
                    Piece::Var(v) if vars.contains_key(v) => out.extend(vars[v].iter().cloned()),
                    Piece::Pow(_, i) if params.contains_key(i) => out.extend(params[i].iter().cloned()),
                    other => out.push(other.clone()),
                }
            }
            out
        };
        for (l, r) in self.pending.iter_mut() {
            *l = rewrite(l);
            *r = rewrite(r);
        }
        for rhs in self.solved.values_mut() {
            *rhs = rewrite(rhs);
        }
    }

    fn define(&mut self, var: &str, value: Side) {
        let map = BTreeMap::from([(var.to_string(), value.clone())]);
        self.substitute(&map, &BTreeMap::new());
        self.solved.insert(var.to_string(), value);
    }

    /// Assigns several variables at once (values must not mention them).
    fn define_all(&mut self, defs: BTreeMap<String, Side>) {
        self.substitute(&defs, &BTreeMap::new());
        for (v, s) in defs {
            self.solved.insert(v, s);
        }
    }
}

/// Strips one equation. `None` means a clash.
fn strip(l: &mut Side, r: &mut Side) -> Option<bool> {
    let mut changed = false;
    while let (Some(a), Some(b)) = (l.first(), r.first()) {
        if a == b {
            l.remove(0);
            r.remove(0);
            changed = true;
        } else if matches!((a, b), (Piece::Ch(_), Piece::Ch(_))) {
            return None;
        } else {
            break;
        }
    }
    while let (Some(a), Some(b)) = (l.last(), r.last()) {
        if a == b {
            l.pop();
            r.pop();
            changed = true;
        } else if matches!((a, b), (Piece::Ch(_), Piece::Ch(_))) {
            return None;
        } else {
            break;
        }
    }
    Some(changed)
}

/// Letter counts must agree when both sides carry the same variables and no
/// powers.
fn parikh_clash(l: &Side, r: &Side) -> bool {
    if has_pow(l) || has_pow(r) {
        return false;
    }
    fn count(s: &Side) -> (BTreeMap<&str, i64>, BTreeMap<char, i64>) {
        let mut vars: BTreeMap<&str, i64> = BTreeMap::new();
        let mut letters: BTreeMap<char, i64> = BTreeMap::new();
        for p in s {
            match p {
                Piece::Ch(c) => *letters.entry(*c).or_default() += 1,
                Piece::Var(v) => *vars.entry(v.as_str()).or_default() += 1,
                Piece::Pow(..) => {}
            }
        }
        (vars, letters)
    }
    let (lv, ll) = count(l);
    let (rv, rl) = count(r);
    lv == rv && ll != rl
}

/// All bindings of the variables in `pattern` that make it spell `word`.
fn match_constant(
    word: &[char],
    pattern: &[Piece],
    binding: &mut BTreeMap<String, Vec<char>>,
    out: &mut Vec<BTreeMap<String, Vec<char>>>,
    limit: usize,
) -> bool {
    if out.len() >= limit {
        return false;
    }
    let Some((first, rest)) = pattern.split_first() else {
        if word.is_empty() {
            out.push(binding.clone());
        }
        return true;
    };
    match first {
        Piece::Ch(c) => {
            if word.first() == Some(c) {
                return match_constant(&word[1..], rest, binding, out, limit);
            }
            true
        }
        Piece::Var(v) => {
            if let Some(val) = binding.get(v).cloned() {
                if word.starts_with(&val) {
                    return match_constant(&word[val.len()..], rest, binding, out, limit);
                }
                return true;
            }
            for k in 0..=word.len() {
                binding.insert(v.clone(), word[..k].to_vec());
                if !match_constant(&word[k..], rest, binding, out, limit) {
                    binding.remove(v);
                    return false;
                }
            }
            binding.remove(v);
            true
        }
        Piece::Pow(..) => unreachable!("constant split runs on power-free sides"),
    }
}

fn chars_side(cs: &[char]) -> Side {
    cs.iter().map(|&c| Piece::Ch(c)).collect()
}

/// Splits `side` as `[letters…, Var]` when it has that exact shape.
fn letters_then_var(side: &Side) -> Option<(Vec<char>, String)> {
    let (last, init) = side.split_last()?;
    let Piece::Var(x) = last else { return None };
    Some((all_chars(&init.to_vec())?, x.clone()))
}

fn var_then_letters(side: &Side) -> Option<(String, Vec<char>)> {
    let (first, rest) = side.split_first()?;
    let Piece::Var(x) = first else { return None };
    Some((x.clone(), all_chars(&rest.to_vec())?))
}

impl Engine<'_> {
    fn fresh_param(&mut self) -> ParamId {
        let p = ParamId(self.next_param);
        self.next_param += 1;
        p
    }

    fn step(&mut self, mut st: State) -> Step {
        // R1/R2 over every equation
        let mut changed = false;
        let mut kept = Vec::with_capacity(st.pending.len());
        for (mut l, mut r) in std::mem::take(&mut st.pending) {
            match strip(&mut l, &mut r) {
                None => return Step::Unsat,
                Some(c) => changed |= c,
            }
            if l.is_empty() && r.is_empty() {
                changed = true;
                continue;
            }
            if parikh_clash(&l, &r) {
                return Step::Unsat;
            }
            kept.push((l, r));
        }
        st.pending = kept;
        if changed {
            return Step::Branch(Rule::Strip, vec![st]);
        }
        if st.pending.is_empty() {
            return Step::Done;
        }

        // ε = α
        for idx in 0..st.pending.len() {
            let (l, r) = &st.pending[idx];
            let other = if l.is_empty() {
                r
            } else if r.is_empty() {
                l
            } else {
                continue;
            };
            if other.iter().any(|p| matches!(p, Piece::Ch(_))) {
                return Step::Unsat;
            }
            let (vars, params) = emptying(other);
            let mut next = st.clone();
            next.pending.remove(idx);
            next.substitute(&BTreeMap::new(), &params);
            next.define_all(vars);
            return Step::Branch(Rule::EmptySide, vec![next]);
        }

        // R3 and self reference
        for idx in 0..st.pending.len() {
            let (l, r) = st.pending[idx].clone();
            for (single, other) in [(&l, &r), (&r, &l)] {
                let [Piece::Var(x)] = single.as_slice() else { continue };
                let occurrences = other.iter().filter(|p| matches!(p, Piece::Var(v) if v == x)).count();
                let mut next = st.clone();
                next.pending.remove(idx);
                if occurrences == 0 {
                    next.define(x, other.clone());
                    return Step::Branch(Rule::Definition, vec![next]);
                }
                if other.iter().any(|p| matches!(p, Piece::Ch(_))) {
                    return Step::Unsat;
                }
                let rest: Side = other.iter().filter(|p| !matches!(p, Piece::Var(v) if v == x)).cloned().collect();
                let (mut vars, params) = emptying(&rest);
                if occurrences >= 2 {
                    vars.insert(x.clone(), Vec::new());
                }
                next.substitute(&BTreeMap::new(), &params);
                next.define_all(vars);
                return Step::Branch(Rule::SelfReference, vec![next]);
            }
        }

        // constant split
        for idx in 0..st.pending.len() {
            let (l, r) = st.pending[idx].clone();
            for (cst, pat) in [(&l, &r), (&r, &l)] {
                let Some(word) = all_chars(cst) else { continue };
                if has_pow(pat) || !has_var(pat) {
                    continue;
                }
                let mut matches = Vec::new();
                if !match_constant(&word, pat, &mut BTreeMap::new(), &mut matches, self.config.max_matches) {
                    return Step::Stuck;
                }
                let children = matches
                    .into_iter()
                    .map(|m| {
                        let mut next = st.clone();
                        next.pending.remove(idx);
                        next.define_all(m.into_iter().map(|(v, cs)| (v, chars_side(&cs))).collect());
                        next
                    })
                    .collect();
                return Step::Branch(Rule::ConstantSplit, children);
            }
        }

        // R4
        for idx in 0..st.pending.len() {
            let (l, r) = st.pending[idx].clone();
            for (a, b) in [(&l, &r), (&r, &l)] {
                let (Some((u, x)), Some((y, v))) = (letters_then_var(a), var_then_letters(b)) else { continue };
                if x != y || u.is_empty() || v.is_empty() {
                    continue;
                }
                let mut children = Vec::new();
                if u.len() == v.len() {
                    for k in 0..u.len() {
                        let (p, q) = u.split_at(k);
                        let qp: Vec<char> = q.iter().chain(p.iter()).copied().collect();
                        if qp != v {
                            continue;
                        }
                        let param = self.fresh_param();
                        let mut value = vec![Piece::Pow(u.iter().collect(), param)];
                        value.extend(chars_side(p));
                        let mut next = st.clone();
                        next.pending.remove(idx);
                        next.define(&x, value);
                        children.push(next);
                    }
                }
                if children.is_empty() {
                    return Step::Unsat;
                }
                return Step::Branch(Rule::Commutation, children);
            }
        }

        // unrolling
        for idx in 0..st.pending.len() {
            let (l, r) = st.pending[idx].clone();
            for (a, b) in [(&l, &r), (&r, &l)] {
                let front = match (a.first(), b.first()) {
                    (Some(Piece::Pow(base, i)), Some(Piece::Ch(_))) => Some((base.clone(), *i, true)),
                    _ => None,
                };
                let back = match (a.last(), b.last()) {
                    (Some(Piece::Pow(base, i)), Some(Piece::Ch(_))) => Some((base.clone(), *i, false)),
                    _ => None,
                };
                let Some((base, i, at_front)) = front.or(back) else { continue };
                if st.rounds >= self.config.max_rounds {
                    return Step::Stuck;
                }
                let mut zero = st.clone();
                zero.substitute(&BTreeMap::new(), &BTreeMap::from([(i, Vec::new())]));
                let j = self.fresh_param();
                let mut unrolled: Side = Vec::new();
                if at_front {
                    unrolled.extend(base.chars().map(Piece::Ch));
                    unrolled.push(Piece::Pow(base.clone(), j));
                } else {
                    unrolled.push(Piece::Pow(base.clone(), j));
                    unrolled.extend(base.chars().map(Piece::Ch));
                }
                let mut succ = st.clone();
                succ.rounds += 1;
                succ.substitute(&BTreeMap::new(), &BTreeMap::from([(i, unrolled)]));
                return Step::Branch(Rule::Unroll, vec![zero, succ]);
            }
        }

        // R5
        for idx in 0..st.pending.len() {
            let (l, r) = st.pending[idx].clone();
            for (a, b) in [(&l, &r), (&r, &l)] {
                let (Some((x, u)), Some((v, y))) = (var_then_letters(a), letters_then_var(b)) else { continue };
                if x == y {
                    continue;
                }
                let mut children = Vec::new();
                for k in 0..v.len() {
                    // |X| = k < |v|: X = v[..k], and u must begin with v[k..]
                    let tail = &v[k..];
                    if u.len() < tail.len() || &u[..tail.len()] != tail {
                        continue;
                    }
                    let mut next = st.clone();
                    next.pending.remove(idx);
                    next.define_all(BTreeMap::from([
                        (x.clone(), chars_side(&v[..k])),
                        (y.clone(), chars_side(&u[tail.len()..])),
                    ]));
                    children.push(next);
                }
                if st.rounds >= self.config.max_rounds {
                    return Step::Stuck;
                }
                let w = self.fresh.fresh("W");
                let mut xv = chars_side(&v);
                xv.push(Piece::Var(w.clone()));
                let mut yv = vec![Piece::Var(w)];
                yv.extend(chars_side(&u));
                let mut next = st.clone();
                next.rounds += 1;
                next.pending.remove(idx);
                next.define_all(BTreeMap::from([(x.clone(), xv), (y.clone(), yv)]));
                children.push(next);
                return Step::Branch(Rule::Straddle, children);
            }
        }

        Step::Stuck
    }
}

/// Substitution sending every variable of `side` to `ε` and every parameter to 0.
fn emptying(side: &Side) -> (BTreeMap<String, Side>, BTreeMap<ParamId, Side>) {
    let mut vars = BTreeMap::new();
    let mut params = BTreeMap::new();
    for p in side {
        match p {
            Piece::Var(v) => {
                vars.insert(v.clone(), Vec::new());
            }
            Piece::Pow(_, i) => {
                params.insert(*i, Vec::new());
            }
            Piece::Ch(_) => {}
        }
    }
    (vars, params)
}

fn finish(st: &State, vars: &BTreeSet<String>) -> SolvedForm {
    let mut part_ids: BTreeMap<String, PartId> = BTreeMap::new();
    let mut equations = BTreeMap::new();
    // free variables in sorted order get consecutive part ids
    let mut free: BTreeSet<String> = BTreeSet::new();
    for x in vars {
        match st.solved.get(x) {
            Some(rhs) => rhs.iter().for_each(|p| {
                if let Piece::Var(v) = p {
                    free.insert(v.clone());
                }
            }),
            None => {
                free.insert(x.clone());
            }
        }
    }
    for (n, v) in free.iter().enumerate() {
        part_ids.insert(v.clone(), PartId(n as u32));
    }
    for x in vars {
        let rhs = st.solved.get(x).cloned().unwrap_or_else(|| vec![Piece::Var(x.clone())]);
        let blocks = rhs
            .into_iter()
            .map(|p| match p {
                Piece::Ch(c) => Block::Const(c.to_string()),
                Piece::Var(v) => Block::Unfixed(part_ids[&v]),
                Piece::Pow(base, i) => Block::Power { base, param: i },
            })
            .collect();
        equations.insert(x.clone(), ParamWord::new(blocks));
    }
    SolvedForm::new(equations).canonical()
}

fn run(
    eqs: &[(StrTerm, StrTerm)],
    vars: &BTreeSet<String>,
    config: RewriteConfig,
    trace: Option<&mut Vec<StepRecord>>,
) -> SolveOutcome {
    let mut all_vars = vars.clone();
    for (l, r) in eqs {
        l.collect_vars(&mut all_vars);
        r.collect_vars(&mut all_vars);
    }
    let mut engine = Engine { config, fresh: FreshNames::new(all_vars.iter().cloned()), next_param: 0, trace };
    let start = State {
        pending: eqs.iter().map(|(l, r)| (side_of(l), side_of(r))).collect(),
        solved: BTreeMap::new(),
        rounds: 0,
    };
    let mut stack = vec![start];
    let mut forms: Vec<SolvedForm> = Vec::new();
    let mut explored = 0usize;
    while let Some(st) = stack.pop() {
        explored += 1;
        if explored > engine.config.max_states {
            return SolveOutcome::NoSolvedFormInFragment;
        }
        let before = measure(&st);
        match engine.step(st.clone()) {
            Step::Done => {
                let sf = finish(&st, &all_vars);
                if !forms.contains(&sf) {
                    forms.push(sf);
                }
            }
            Step::Unsat => {}
            Step::Stuck => return SolveOutcome::NoSolvedFormInFragment,
            Step::Branch(rule, children) => {
                let after: Vec<Measure> = children.iter().map(measure).collect();
                if rule != Rule::Unroll {
                    debug_assert!(after.iter().all(|m| *m < before), "{rule:?} did not decrease {before:?}");
                }
                if let Some(t) = engine.trace.as_deref_mut() {
                    t.push(StepRecord { rule, before, after });
                }
                // reversed so the first child is explored first
                stack.extend(children.into_iter().rev());
            }
        }
    }
    if forms.is_empty() {
        SolveOutcome::Unsat
    } else {
        SolveOutcome::Forms(forms)
    }
}

/// Solved forms for a conjunction of word equations over the variables that
/// occur in it.
pub fn to_solved_form(eqs: &[(StrTerm, StrTerm)]) -> SolveOutcome {
    run(eqs, &BTreeSet::new(), RewriteConfig::default(), None)
}

/// Like [`to_solved_form`] but every variable of `vars` is also defined,
/// unconstrained ones as unfixed parts.
pub fn to_solved_form_over(eqs: &[(StrTerm, StrTerm)], vars: &BTreeSet<String>, config: RewriteConfig) -> SolveOutcome {
    run(eqs, vars, config, None)
}

/// Runs the rewriting and records every step with its termination measure.
pub fn to_solved_form_traced(eqs: &[(StrTerm, StrTerm)]) -> (SolveOutcome, Vec<StepRecord>) {
    let mut trace = Vec::new();
    let out = run(eqs, &BTreeSet::new(), RewriteConfig::default(), Some(&mut trace));
    (out, trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(parts: &[&str]) -> StrTerm {
        // upper-case single letters are variables
        StrTerm::concat(
            parts
                .iter()
                .map(|p| {
                    if p.chars().next().is_some_and(|c| c.is_ascii_uppercase()) {
                        StrTerm::var(p)
                    } else {
                        StrTerm::lit(p)
                    }
                })
                .collect(),
        )
    }

    fn forms(out: SolveOutcome) -> Vec<String> {
        match out {
            SolveOutcome::Forms(fs) => fs.iter().map(|f| f.to_string()).collect(),
            other => panic!("expected forms, got {other:?}"),
        }
    }

    #[test]
    fn commutation_example() {
        let out = to_solved_form(&[(t(&["ab", "X"]), t(&["X", "ba"]))]);
        assert_eq!(forms(out), vec!["X = (ab)^i0·a"]);
    }

    #[test]
    fn two_variable_example() {
        let out = to_solved_form(&[(t(&["X", "a"]), t(&["a", "Y"])), (t(&["Y", "a"]), t(&["X", "a"]))]);
        assert_eq!(forms(out), vec!["X = a^i0 ∧ Y = a^i0"]);
    }

    #[test]
    fn no_linear_solved_form() {
        let out = to_solved_form(&[(t(&["X", "ab", "Y"]), t(&["Y", "ba", "X"]))]);
        assert_eq!(out, SolveOutcome::NoSolvedFormInFragment);
    }

    #[test]
    fn constant_clash() {
        assert_eq!(to_solved_form(&[(t(&["ab"]), t(&["ba"]))]), SolveOutcome::Unsat);
        assert_eq!(to_solved_form(&[(t(&["X"]), t(&["a", "X"]))]), SolveOutcome::Unsat);
    }

    #[test]
    fn definition_then_commutation() {
        let out = to_solved_form(&[(t(&["ab", "X"]), t(&["X", "ba"])), (t(&["X"]), t(&["ab", "Y"]))]);
        assert_eq!(forms(out), vec!["X = ab·(ab)^i0·a ∧ Y = (ab)^i0·a"]);
    }

    #[test]
    fn unfixed_parts() {
        let out = to_solved_form(&[(t(&["X"]), t(&["a", "Y", "b", "Z", "a"]))]);
        assert_eq!(forms(out), vec!["X = a·u0·b·u1·a ∧ Y = u0 ∧ Z = u1"]);
    }

    #[test]
    fn constant_split_enumerates() {
        let out = to_solved_form(&[(t(&["ab"]), t(&["X", "Y"]))]);
        assert_eq!(forms(out), vec!["X = ε ∧ Y = ab", "X = a ∧ Y = b", "X = ab ∧ Y = ε"]);
    }

    #[test]
    fn straddle_includes_short_solutions() {
        // Xa = aY holds for X = Y = ε as well as X = aW, Y = Wa
        let out = to_solved_form(&[(t(&["X", "a"]), t(&["a", "Y"]))]);
        assert_eq!(forms(out), vec!["X = ε ∧ Y = ε", "X = a·u0 ∧ Y = u0·a"]);
    }

    #[test]
    fn unrolling_reparameterizes() {
        // solve X first, then (ab)^i a = ab Y forces i = j + 1
        let eqs = [(t(&["ab", "X"]), t(&["X", "ba"])), (t(&["X", "b"]), t(&["ab", "Y", "b"]))];
        let out = to_solved_form(&eqs);
        let fs = forms(out);
        assert_eq!(fs.len(), 1, "{fs:?}");
        assert!(fs[0].contains("Y = (ab)^i0·a"), "{fs:?}");
    }

    #[test]
    fn measures_decrease() {
        let cases: Vec<Vec<(StrTerm, StrTerm)>> = vec![
            vec![(t(&["ab", "X"]), t(&["X", "ba"])), (t(&["X"]), t(&["ab", "Y"]))],
            vec![(t(&["X", "a"]), t(&["a", "Y"])), (t(&["Y", "a"]), t(&["X", "a"]))],
            vec![(t(&["X", "ab"]), t(&["ba", "Y"])), (t(&["Y"]), t(&["Z", "Z"]))],
            vec![(t(&["aab"]), t(&["X", "Y", "X"]))],
        ];
        for eqs in cases {
            let (_, trace) = to_solved_form_traced(&eqs);
            assert!(!trace.is_empty());
            for rec in trace.iter().filter(|r| r.rule != Rule::Unroll) {
                assert!(rec.after.iter().all(|m| *m < rec.before), "{rec:?}");
            }
        }
    }
}
