//! The end-to-end decision procedure.
//!
//! Each disjunct of the negation-free DNF is handled separately: its word
//! equations are rewritten into solved forms, each solved form contributes its
//! implied length rows, the length atoms are linearized, and every regex atom
//! is turned into a finite choice of parameter constraints. Every combination
//! is handed to the integer solver; the first model is turned back into a
//! string assignment and verified against the input formula.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::automata::{length_set, param_membership, regex_to_dfa, AutomataError, UPSet};
use crate::lengths::{implied_length_constraints, translate_len_atom, upset_to_rows, LinRow, LinSystem, LinVar};
use crate::lia::{lia_sat_with, LiaError, LiaModel, LiaOutcome, DEFAULT_NODE_CAP};
use crate::normalize::{eliminate_negations, to_dnf, FreshNames};
use crate::semantics::eval_formula;
use crate::solved_form::{to_solved_form_over, Block, ParamWord, RewriteConfig, SolveOutcome, SolvedForm};
use crate::syntax::{Alphabet, Assignment, Atom, Formula, LenTerm, StrTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UnsupportedReason {
    NoSolvedFormInFragment,
    UnfixedPartUnderRegex,
    ResourceExhausted,
}

impl fmt::Display for UnsupportedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnsupportedReason::NoSolvedFormInFragment => "no solved form in fragment",
            UnsupportedReason::UnfixedPartUnderRegex => "unfixed part under regex",
            UnsupportedReason::ResourceExhausted => "resource exhausted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(Assignment),
    Unsat,
    Unsupported(UnsupportedReason),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("coefficient overflow")]
    CoefficientOverflow,
}

impl From<AutomataError> for SolverError {
    fn from(e: AutomataError) -> Self {
        match e {
            AutomataError::LetterOutsideAlphabet(c) => SolverError::LetterOutsideAlphabet(c),
            // regexes and parametric words are always compiled over the same
            // alphabet, and unfixed parts are screened out beforehand
            other => unreachable!("{other}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub rewrite: RewriteConfig,
    pub lia_nodes: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { rewrite: RewriteConfig::default(), lia_nodes: DEFAULT_NODE_CAP }
    }
}

/// How regex atoms are turned into linear rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RegexMode {
    /// Exact: parameter constraints of the solved-form value.
    Params,
    /// Only the length set of the regex. Unsound; kept for comparison.
    LengthOnly,
}

enum Conjunct {
    Sat(Assignment),
    Unsat,
    Blocked(UnsupportedReason),
}

pub fn check_sat(phi: &Formula, sigma: &Alphabet) -> Result<Verdict, SolverError> {
    check_sat_with(phi, sigma, &SolverConfig::default())
}

pub fn check_sat_with(phi: &Formula, sigma: &Alphabet, config: &SolverConfig) -> Result<Verdict, SolverError> {
    let verdict = run(phi, sigma, config, RegexMode::Params)?;
    if let Verdict::Sat(a) = &verdict {
        assert!(verify_model(phi, a), "model fails verification");
    }
    Ok(verdict)
}

/// Decides `phi` with every regex atom replaced by the length set of its
/// language. The answer ignores which words the regex admits, so it can claim
/// `Sat` for unsatisfiable inputs; models are not verified.
#[doc(hidden)]
pub fn check_sat_length_only(phi: &Formula, sigma: &Alphabet) -> Result<Verdict, SolverError> {
    run(phi, sigma, &SolverConfig::default(), RegexMode::LengthOnly)
}

/// True iff `a` satisfies `phi` (unmapped variables count as failure).
pub fn verify_model(phi: &Formula, a: &Assignment) -> bool {
    eval_formula(phi, a).unwrap_or(false)
}

fn run(phi: &Formula, sigma: &Alphabet, config: &SolverConfig, mode: RegexMode) -> Result<Verdict, SolverError> {
    if let Some(c) = phi.letters().into_iter().find(|c| !sigma.contains(*c)) {
        return Err(SolverError::LetterOutsideAlphabet(c));
    }
    let (strs, ints) = phi.free_vars();
    let mut blocked: Option<UnsupportedReason> = None;
    for conj in to_dnf(phi) {
        let mut fresh = FreshNames::new(strs.iter().chain(ints.iter()).cloned());
        for atoms in eliminate_negations(&conj, sigma, &mut fresh)? {
            match solve_conjunct(&atoms, sigma, config, mode)? {
                Conjunct::Sat(model) => {
                    let mut a = Assignment::new();
                    for x in &strs {
                        a.set_str(x, model.strs.get(x).cloned().unwrap_or_default());
                    }
                    for n in &ints {
                        a.set_int(n, model.ints.get(n).copied().unwrap_or(0));
                    }
                    return Ok(Verdict::Sat(a));
                }
                Conjunct::Unsat => {}
                Conjunct::Blocked(r) => {
                    blocked.get_or_insert(r);
                }
            }
        }
    }
    Ok(match blocked {
        Some(r) => Verdict::Unsupported(r),
        None => Verdict::Unsat,
    })
}

fn solve_conjunct(
    atoms: &[Atom],
    sigma: &Alphabet,
    config: &SolverConfig,
    mode: RegexMode,
) -> Result<Conjunct, SolverError> {
    let mut eqs = Vec::new();
    let mut lens = Vec::new();
    let mut res = Vec::new();
    let mut strs = BTreeSet::new();
    let mut ints = BTreeSet::new();
    for a in atoms {
        a.collect_vars(&mut strs, &mut ints);
        match a {
            Atom::WordEq(l, r) => eqs.push((l.clone(), r.clone())),
            Atom::LenLeq(t, c) => lens.push((t, *c)),
            Atom::InRe(t, r) => res.push((t, r)),
        }
    }
    let forms = match to_solved_form_over(&eqs, &strs, config.rewrite) {
        SolveOutcome::Unsat => return Ok(Conjunct::Unsat),
        SolveOutcome::NoSolvedFormInFragment => return Ok(Conjunct::Blocked(UnsupportedReason::NoSolvedFormInFragment)),
        SolveOutcome::Forms(fs) => fs,
    };
    let mut len_rows = Vec::new();
    for (t, c) in &lens {
        len_rows.push(translate_len_atom(t, *c).map_err(|_| SolverError::CoefficientOverflow)?);
    }

    let mut blocked = None;
    for sf in &forms {
        let mut base = implied_length_constraints(sf);
        base.extend(len_rows.iter().cloned());
        let mut fresh_ap = 0u32;
        let mut choices: Vec<Vec<Vec<LinRow>>> = Vec::new();
        let mut refuted = false;
        for (t, r) in &res {
            let dfa = regex_to_dfa(r, sigma)?;
            let alts = match mode {
                RegexMode::LengthOnly => length_alternatives(t, &length_set(&dfa), &mut fresh_ap)?,
                RegexMode::Params => {
                    let pw = sf.apply(t).expect("solved form defines every variable");
                    if pw.has_unfixed() {
                        blocked.get_or_insert(UnsupportedReason::UnfixedPartUnderRegex);
                        refuted = true;
                        break;
                    }
                    param_alternatives(&pw, &dfa, sigma, &mut fresh_ap)?
                }
            };
            if alts.is_empty() {
                refuted = true;
                break;
            }
            choices.push(alts);
        }
        if refuted {
            continue;
        }
        match search_branches(&base, &choices, config.lia_nodes) {
            Ok(Some(m)) => return Ok(Conjunct::Sat(build_model(sf, &m, sigma))),
            Ok(None) => {}
            Err(LiaError::ResourceExhausted(_)) => {
                blocked.get_or_insert(UnsupportedReason::ResourceExhausted);
            }
            Err(LiaError::CoefficientOverflow) => return Err(SolverError::CoefficientOverflow),
        }
    }
    Ok(match blocked {
        Some(r) => Conjunct::Blocked(r),
        None => Conjunct::Unsat,
    })
}

/// Alternatives for `pw ∈ L(dfa)`: one per accepted box and per combination
/// of progressions inside it.
fn param_alternatives(
    pw: &ParamWord,
    dfa: &crate::automata::Dfa,
    sigma: &Alphabet,
    fresh_ap: &mut u32,
) -> Result<Vec<Vec<LinRow>>, SolverError> {
    let values = regex_to_dfa(&pw.to_regex()?, sigma)?;
    if values.intersect(dfa)?.is_empty() {
        return Ok(Vec::new());
    }
    let boxes = param_membership(pw, dfa)?;
    let mut out = Vec::new();
    for b in &boxes.boxes {
        let mut combos: Vec<Vec<LinRow>> = vec![Vec::new()];
        for (p, set) in b {
            let rows = upset_to_rows(&LinVar::ParamOf(*p), set, fresh_ap);
            combos = combos
                .iter()
                .flat_map(|c| {
                    rows.iter().map(move |r| {
                        let mut c = c.clone();
                        c.extend(r.iter().cloned());
                        c
                    })
                })
                .collect();
        }
        out.extend(combos);
    }
    Ok(out)
}

/// Alternatives for `len(t) ∈ s`.
fn length_alternatives(t: &StrTerm, s: &UPSet, fresh_ap: &mut u32) -> Result<Vec<Vec<LinRow>>, SolverError> {
    let row = translate_len_atom(&LenTerm::Len(t.clone()), 0).map_err(|_| SolverError::CoefficientOverflow)?;
    // row reads `Σ len ≤ -C`, so len(t) = Σ len + C
    let constant = -row.bound;
    Ok(s.progressions()
        .iter()
        .map(|prog| {
            let mut coeffs: Vec<(LinVar, i64)> = row.coeffs.clone().into_iter().collect();
            if prog.period > 0 {
                coeffs.push((LinVar::FreshAp(*fresh_ap), -(prog.period as i64)));
                *fresh_ap += 1;
            }
            vec![LinRow::eq(coeffs, prog.offset as i64 - constant)]
        })
        .collect())
}

fn search_branches(
    base: &LinSystem,
    choices: &[Vec<Vec<LinRow>>],
    nodes: usize,
) -> Result<Option<LiaModel>, LiaError> {
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut sys = base.clone();
        for (alts, &k) in choices.iter().zip(&pick) {
            sys.extend(alts[k].iter().cloned());
        }
        if let LiaOutcome::Sat(m) = lia_sat_with(&sys, nodes)? {
            return Ok(Some(m));
        }
        // odometer over the choices, last position fastest
        let mut i = choices.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < choices[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Instantiates `sf` with the parameters of `m`; unfixed parts become runs of
/// the first alphabet letter of the prescribed length.
pub fn build_model(sf: &SolvedForm, m: &LiaModel, sigma: &Alphabet) -> Assignment {
    let fill = sigma.letters().first().copied().unwrap_or('a');
    let mut a = Assignment::new();
    for (x, w) in &sf.equations {
        let mut s = String::new();
        for b in w.blocks() {
            match b {
                Block::Const(c) => s.push_str(c),
                Block::Power { base, param } => s.push_str(&base.repeat(m.get(&LinVar::ParamOf(*param)) as usize)),
                Block::Unfixed(p) => s.extend(std::iter::repeat_n(fill, m.get(&LinVar::PartLenOf(*p)) as usize)),
            }
        }
        a.set_str(x, s);
    }
    for (v, n) in &m.values {
        if let LinVar::ProblemInt(name) = v {
            a.set_int(name, *n);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solved_form::ParamId;
    use crate::syntax::Regex;

    fn ab_x_x_ba() -> Formula {
        Formula::eq(
            StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("X")]),
            StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::lit("ba")]),
        )
    }

    fn len(x: &str) -> LenTerm {
        LenTerm::Len(StrTerm::var(x))
    }

    fn sigma() -> Alphabet {
        Alphabet::default()
    }

    #[test]
    fn regex_example() {
        let re = Regex::Concat(vec![
            Regex::Union(vec![Regex::lit("ab"), Regex::lit("ba")]),
            Regex::star(Regex::lit("ab")),
            Regex::lit("a"),
        ]);
        let phi = Formula::and(vec![ab_x_x_ba(), Formula::in_re(StrTerm::var("X"), re), Formula::leq(len("X"), 5)]);
        let Verdict::Sat(a) = check_sat(&phi, &sigma()).unwrap() else { panic!() };
        assert!(["aba", "ababa"].contains(&a.str_value("X").unwrap()));
    }

    #[test]
    fn shifted_definition_unsat() {
        let phi = Formula::and(vec![
            ab_x_x_ba(),
            Formula::eq(StrTerm::var("X"), StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("Y")])),
            Formula::leq(len("X"), 1),
        ]);
        assert_eq!(check_sat(&phi, &sigma()).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn length_only_abstraction_is_unsound() {
        let re = Regex::Concat(vec![Regex::star(Regex::lit("ab")), Regex::lit("b")]);
        let phi = Formula::and(vec![ab_x_x_ba(), Formula::in_re(StrTerm::var("X"), re), Formula::leq(len("X"), 3)]);
        assert_eq!(check_sat(&phi, &sigma()).unwrap(), Verdict::Unsat);
        assert!(check_sat_length_only(&phi, &sigma()).unwrap().is_sat());
    }

    #[test]
    fn definition_with_length_bound() {
        let phi = Formula::and(vec![
            Formula::eq(StrTerm::var("X"), StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("Y")])),
            Formula::not(Formula::leq(len("Y"), 1)),
        ]);
        let Verdict::Sat(a) = check_sat(&phi, &sigma()).unwrap() else { panic!() };
        let (x, y) = (a.str_value("X").unwrap(), a.str_value("Y").unwrap());
        assert_eq!(x.len(), y.len() + 2);
        assert!(y.len() >= 2);
        let tighter = Formula::and(vec![phi, Formula::leq(len("X"), 2)]);
        assert_eq!(check_sat(&tighter, &sigma()).unwrap(), Verdict::Unsat);
    }

    #[test]
    fn no_solved_form() {
        let phi = Formula::eq(
            StrTerm::Concat(vec![StrTerm::var("X"), StrTerm::lit("ab"), StrTerm::var("Y")]),
            StrTerm::Concat(vec![StrTerm::var("Y"), StrTerm::lit("ba"), StrTerm::var("X")]),
        );
        assert_eq!(
            check_sat(&phi, &sigma()).unwrap(),
            Verdict::Unsupported(UnsupportedReason::NoSolvedFormInFragment)
        );
    }

    #[test]
    fn unfixed_part_under_regex() {
        let phi = Formula::in_re(StrTerm::var("X"), Regex::star(Regex::lit("a")));
        assert_eq!(
            check_sat(&phi, &sigma()).unwrap(),
            Verdict::Unsupported(UnsupportedReason::UnfixedPartUnderRegex)
        );
    }

    #[test]
    fn negated_equation() {
        let phi = Formula::and(vec![
            Formula::not(Formula::eq(StrTerm::var("X"), StrTerm::lit("a"))),
            Formula::leq(len("X"), 1),
            Formula::not(Formula::leq(len("X"), 0)),
        ]);
        let Verdict::Sat(a) = check_sat(&phi, &sigma()).unwrap() else { panic!() };
        assert_eq!(a.str_value("X"), Some("b"));
    }

    #[test]
    fn integer_variables() {
        let phi = Formula::and(vec![
            Formula::eq(StrTerm::var("X"), StrTerm::lit("aaa")),
            Formula::leq(LenTerm::Sum(vec![(1, len("X")), (-1, LenTerm::IntVar("n".into()))]), 0),
        ]);
        let Verdict::Sat(a) = check_sat(&phi, &sigma()).unwrap() else { panic!() };
        assert!(a.ints["n"] >= 3);
    }

    #[test]
    fn letter_outside_alphabet() {
        let phi = Formula::eq(StrTerm::var("X"), StrTerm::lit("c"));
        assert_eq!(check_sat(&phi, &sigma()), Err(SolverError::LetterOutsideAlphabet('c')));
    }

    #[test]
    fn build_model_instantiates() {
        let sf = SolvedForm::new(std::collections::BTreeMap::from([(
            "X".to_string(),
            ParamWord::new(vec![Block::power("ab", ParamId(0)), Block::Const("a".into())]),
        )]));
        let m = LiaModel { values: [(LinVar::ParamOf(ParamId(0)), 1)].into_iter().collect() };
        assert_eq!(build_model(&sf, &m, &sigma()).str_value("X"), Some("aba"));
        let m = LiaModel::default();
        assert_eq!(build_model(&sf, &m, &sigma()).str_value("X"), Some("a"));
    }
}
