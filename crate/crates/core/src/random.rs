//! Seeded random generators for formulas, regexes, linear systems and solved
//! forms. Used by the property and differential tests and by the corpus
//! generator.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::lengths::{LinRow, LinSystem, LinVar};
use crate::solved_form::{Block, ParamId, ParamWord, PartId, SolvedForm};
use crate::syntax::{Alphabet, Assignment, Formula, LenTerm, Regex, StrTerm};

const VAR_NAMES: [&str; 3] = ["X", "Y", "Z"];

pub fn random_word<R: Rng>(rng: &mut R, sigma: &Alphabet, min: usize, max: usize) -> String {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| *sigma.letters().choose(rng).unwrap()).collect()
}

fn random_str_term<R: Rng>(rng: &mut R, sigma: &Alphabet, vars: &[&str]) -> StrTerm {
    let n = rng.gen_range(1..=3);
    let parts = (0..n)
        .map(|_| {
            if rng.gen_bool(0.5) {
                StrTerm::var(vars.choose(rng).unwrap())
            } else {
                StrTerm::Lit(random_word(rng, sigma, 1, 2))
            }
        })
        .collect();
    StrTerm::concat(parts)
}

pub fn random_regex<R: Rng>(rng: &mut R, sigma: &Alphabet, depth: usize) -> Regex {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        return if rng.gen_bool(0.1) { Regex::Epsilon } else { Regex::Lit(random_word(rng, sigma, 1, 2)) };
    }
    match rng.gen_range(0..3) {
        0 => Regex::Concat((0..rng.gen_range(2..=3)).map(|_| random_regex(rng, sigma, depth - 1)).collect()),
        1 => Regex::Union((0..2).map(|_| random_regex(rng, sigma, depth - 1)).collect()),
        _ => Regex::star(random_regex(rng, sigma, depth - 1)),
    }
}

fn random_len_term<R: Rng>(rng: &mut R, sigma: &Alphabet, strs: &[&str], ints: &[&str]) -> LenTerm {
    let n = rng.gen_range(1..=2);
    let mut terms = Vec::new();
    for _ in 0..n {
        let t = if !ints.is_empty() && rng.gen_bool(0.25) {
            LenTerm::IntVar(ints.choose(rng).unwrap().to_string())
        } else {
            LenTerm::Len(random_str_term(rng, sigma, strs))
        };
        terms.push((rng.gen_range(-2..=2), t));
    }
    if terms.len() == 1 && terms[0].0 == 1 && !matches!(terms[0].1, LenTerm::Sum(_)) {
        terms.pop().unwrap().1
    } else {
        LenTerm::Sum(terms)
    }
}

fn random_atom<R: Rng>(rng: &mut R, sigma: &Alphabet, strs: &[&str], ints: &[&str]) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::eq(random_str_term(rng, sigma, strs), random_str_term(rng, sigma, strs)),
        1 => Formula::leq(random_len_term(rng, sigma, strs, ints), rng.gen_range(-2..=6)),
        _ => Formula::in_re(random_str_term(rng, sigma, strs), random_regex(rng, sigma, 2)),
    }
}

/// Arbitrary formula of the given depth over up to three string variables
/// and the integer variables `ints`.
pub fn random_formula<R: Rng>(rng: &mut R, sigma: &Alphabet, depth: usize, nvars: usize, ints: &[&str]) -> Formula {
    let strs = &VAR_NAMES[..nvars.clamp(1, 3)];
    if depth == 0 || rng.gen_bool(0.25) {
        return random_atom(rng, sigma, strs, ints);
    }
    match rng.gen_range(0..3) {
        0 => Formula::And((0..rng.gen_range(1..=3)).map(|_| random_formula(rng, sigma, depth - 1, nvars, ints)).collect()),
        1 => Formula::Or((0..rng.gen_range(1..=3)).map(|_| random_formula(rng, sigma, depth - 1, nvars, ints)).collect()),
        _ => Formula::not(random_formula(rng, sigma, depth - 1, nvars, ints)),
    }
}

/// Assignment of every free variable of `phi`.
pub fn random_assignment<R: Rng>(rng: &mut R, phi: &Formula, sigma: &Alphabet, max_len: usize, max_int: u64) -> Assignment {
    let (strs, ints) = phi.free_vars();
    let mut a = Assignment::new();
    for x in strs {
        a.set_str(&x, random_word(rng, sigma, 0, max_len));
    }
    for n in ints {
        a.set_int(&n, rng.gen_range(0..=max_int));
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Role {
    Free,
    Const,
    Commutation,
    Definition,
    Straddle,
    Split,
    /// Right-hand partner of a straddle or split equation.
    Bound,
}

/// A conjunction in the solved-form fragment, as a list of formulas.
fn fragment_conjunct<R: Rng>(rng: &mut R, sigma: &Alphabet, with_regex: bool) -> Vec<Formula> {
    let nvars = rng.gen_range(1..=3);
    let mut vars: Vec<&str> = VAR_NAMES[..nvars].to_vec();
    vars.shuffle(rng);
    let mut roles = vec![Role::Free; nvars];
    let mut uses: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nvars];
    let mut straddled = vec![false; nvars];
    let mut parts: Vec<Formula> = Vec::new();
    // definitions only mention later variables, so they never form cycles
    for i in (0..nvars).rev() {
        if roles[i] != Role::Free {
            continue;
        }
        let x = StrTerm::var(vars[i]);
        let later_free: Vec<usize> = (i + 1..nvars).filter(|&j| roles[j] == Role::Free).collect();
        let choice = rng.gen_range(0..10);
        match choice {
            0 | 1 => {
                roles[i] = Role::Const;
                parts.push(Formula::eq(x, StrTerm::Lit(random_word(rng, sigma, 0, 4))));
            }
            2 | 3 => {
                roles[i] = Role::Commutation;
                let u = random_word(rng, sigma, 1, 3);
                let v = match rng.gen_range(0..10) {
                    0 => random_word(rng, sigma, u.len(), u.len()),
                    1 => random_word(rng, sigma, 1, 3),
                    _ => {
                        let k = rng.gen_range(0..u.len());
                        format!("{}{}", &u[k..], &u[..k])
                    }
                };
                let (l, r) = (StrTerm::concat(vec![StrTerm::Lit(u), x.clone()]), StrTerm::concat(vec![x, StrTerm::Lit(v)]));
                parts.push(if rng.gen_bool(0.5) { Formula::eq(l, r) } else { Formula::eq(r, l) });
            }
            4..=6 if i + 1 < nvars => {
                roles[i] = Role::Definition;
                let n = rng.gen_range(1..=3);
                let mut t = Vec::new();
                for _ in 0..n {
                    if rng.gen_bool(0.6) {
                        let j = rng.gen_range(i + 1..nvars);
                        uses[i].insert(j);
                        t.push(StrTerm::var(vars[j]));
                    } else {
                        t.push(StrTerm::Lit(random_word(rng, sigma, 1, 2)));
                    }
                }
                if uses[i].is_empty() {
                    let j = rng.gen_range(i + 1..nvars);
                    uses[i].insert(j);
                    t.push(StrTerm::var(vars[j]));
                }
                parts.push(Formula::eq(x, StrTerm::concat(t)));
            }
            7 if !later_free.is_empty() => {
                let j = *later_free.choose(rng).unwrap();
                roles[i] = Role::Straddle;
                roles[j] = Role::Bound;
                straddled[j] = true;
                let u = random_word(rng, sigma, 1, 2);
                let v = random_word(rng, sigma, 1, 2);
                parts.push(Formula::eq(
                    StrTerm::concat(vec![x, StrTerm::Lit(u)]),
                    StrTerm::concat(vec![StrTerm::Lit(v), StrTerm::var(vars[j])]),
                ));
            }
            8 if !later_free.is_empty() => {
                let j = *later_free.choose(rng).unwrap();
                roles[i] = Role::Split;
                roles[j] = Role::Bound;
                parts.push(Formula::eq(
                    StrTerm::Lit(random_word(rng, sigma, 0, 4)),
                    StrTerm::concat(vec![x, StrTerm::var(vars[j])]),
                ));
            }
            _ => {}
        }
    }
    // variables whose solved form has no unfixed parts
    let mut fixed = vec![false; nvars];
    for i in (0..nvars).rev() {
        fixed[i] = match roles[i] {
            Role::Const | Role::Commutation | Role::Split => true,
            Role::Bound => !straddled[i],
            Role::Free | Role::Straddle => false,
            Role::Definition => uses[i].iter().all(|&j| fixed[j]),
        };
    }

    // at most one negated word equation, only on free or constant variables
    let negatable: Vec<usize> =
        (0..nvars).filter(|&i| matches!(roles[i], Role::Free | Role::Const | Role::Split)).collect();
    if !negatable.is_empty() && rng.gen_bool(0.3) {
        let i = *negatable.choose(rng).unwrap();
        let others: Vec<usize> = negatable.iter().copied().filter(|&j| j != i).collect();
        let rhs = if !others.is_empty() && rng.gen_bool(0.4) {
            StrTerm::var(vars[*others.choose(rng).unwrap()])
        } else {
            StrTerm::Lit(random_word(rng, sigma, 0, 3))
        };
        parts.push(Formula::not(Formula::eq(StrTerm::var(vars[i]), rhs)));
    }

    for _ in 0..rng.gen_range(0..=2) {
        let x = vars.choose(rng).unwrap();
        let y = vars.choose(rng).unwrap();
        let c = rng.gen_range(0..=6);
        let atom = match rng.gen_range(0..4) {
            0 => Formula::leq(LenTerm::Len(StrTerm::var(x)), c),
            1 => Formula::not(Formula::leq(LenTerm::Len(StrTerm::var(x)), c)),
            2 => Formula::leq(
                LenTerm::Sum(vec![(1, LenTerm::Len(StrTerm::var(x))), (-1, LenTerm::Len(StrTerm::var(y)))]),
                c - 3,
            ),
            _ => Formula::leq(
                LenTerm::Sum(vec![(1, LenTerm::Len(StrTerm::var(x))), (1, LenTerm::Len(StrTerm::var(y)))]),
                c,
            ),
        };
        parts.push(atom);
    }

    if with_regex {
        let candidates: Vec<usize> = (0..nvars).filter(|&i| fixed[i]).collect();
        for _ in 0..rng.gen_range(1..=2) {
            let Some(&i) = candidates.choose(rng) else { break };
            let re = random_regex(rng, sigma, 3);
            let atom = Formula::in_re(StrTerm::var(vars[i]), re);
            parts.push(if rng.gen_bool(0.2) { Formula::not(atom) } else { atom });
        }
    }
    parts
}

/// A formula whose every disjunct lies in the solved-form fragment. With
/// `with_regex`, regex atoms are added on variables whose solved form has no
/// unfixed parts.
pub fn random_fragment_formula<R: Rng>(rng: &mut R, sigma: &Alphabet, with_regex: bool) -> Formula {
    if rng.gen_bool(0.2) {
        Formula::Or((0..2).map(|_| Formula::And(fragment_conjunct(rng, sigma, with_regex))).collect())
    } else {
        Formula::And(fragment_conjunct(rng, sigma, with_regex))
    }
}

/// Rows over up to `nvars` unknowns with small coefficients.
pub fn random_lin_system<R: Rng>(rng: &mut R, nvars: usize, nrows: usize, coeff: i64) -> LinSystem {
    let vars: Vec<LinVar> = (0..nvars as u32).map(LinVar::FreshAp).collect();
    let rows = (0..nrows)
        .map(|_| {
            let coeffs: Vec<(LinVar, i64)> = vars.iter().map(|v| (v.clone(), rng.gen_range(-coeff..=coeff))).collect();
            let bound = rng.gen_range(-10..=20);
            if rng.gen_bool(0.3) {
                LinRow::eq(coeffs, bound)
            } else {
                LinRow::le(coeffs, bound)
            }
        })
        .collect();
    LinSystem::new(rows)
}

/// Solved form over `X, Y, Z` drawing from two parameters and two unfixed
/// parts, so that blocks are shared between equations.
pub fn random_solved_form<R: Rng>(rng: &mut R, sigma: &Alphabet) -> SolvedForm {
    let nvars = rng.gen_range(1..=3);
    let mut equations = BTreeMap::new();
    for x in &VAR_NAMES[..nvars] {
        let blocks = (0..rng.gen_range(0..=4))
            .map(|_| match rng.gen_range(0..3) {
                0 => Block::Const(random_word(rng, sigma, 1, 2)),
                1 => Block::power(&random_word(rng, sigma, 1, 2), ParamId(rng.gen_range(0..2))),
                _ => Block::Unfixed(PartId(rng.gen_range(0..2))),
            })
            .collect();
        equations.insert(x.to_string(), ParamWord::new(blocks));
    }
    SolvedForm::new(equations)
}
