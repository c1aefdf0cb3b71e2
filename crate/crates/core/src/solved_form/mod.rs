//! Solved forms: every string variable defined by a parametric word built
//! from constants, powers `u^i` of constant words with natural-number
//! parameters, and unfixed parts standing for arbitrary strings.

mod rewrite;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::automata::{regex_to_dfa, AutomataError, Dfa};
use crate::syntax::{Alphabet, Regex, StrTerm};

pub use rewrite::{
    to_solved_form, to_solved_form_over, to_solved_form_traced, Measure, RewriteConfig, Rule, SolveOutcome,
    StepRecord,
};

/// Integer parameter appearing as an exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParamId(pub u32);

/// Unfixed part: a placeholder for an arbitrary string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartId(pub u32);

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i{}", self.0)
    }
}

impl fmt::Display for PartId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Const(String),
    /// `base^param`; the base is never empty.
    Power { base: String, param: ParamId },
    Unfixed(PartId),
}

impl Block {
    pub fn power(base: &str, param: ParamId) -> Self {
        assert!(!base.is_empty(), "power base must be nonempty");
        Block::Power { base: base.to_string(), param }
    }
}

/// A parametric word. Adjacent constants are merged and empty constants
/// dropped on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamWord {
    blocks: Vec<Block>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("parameter {0} has no value")]
    UnmappedParam(ParamId),
    #[error("unfixed part {0} has no value")]
    UnmappedPart(PartId),
}

impl ParamWord {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut out: Vec<Block> = Vec::with_capacity(blocks.len());
        for b in blocks {
            match b {
                Block::Const(s) if s.is_empty() => {}
                Block::Const(s) => match out.last_mut() {
                    Some(Block::Const(prev)) => prev.push_str(&s),
                    _ => out.push(Block::Const(s)),
                },
                other => out.push(other),
            }
        }
        ParamWord { blocks: out }
    }

    pub fn constant(w: &str) -> Self {
        ParamWord::new(vec![Block::Const(w.to_string())])
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn concat(&self, other: &ParamWord) -> ParamWord {
        ParamWord::new(self.blocks.iter().chain(other.blocks.iter()).cloned().collect())
    }

    pub fn has_unfixed(&self) -> bool {
        self.blocks.iter().any(|b| matches!(b, Block::Unfixed(_)))
    }

    pub fn params(&self) -> BTreeSet<ParamId> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::Power { param, .. } => Some(*param),
                _ => None,
            })
            .collect()
    }

    pub fn parts(&self) -> BTreeSet<PartId> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                Block::Unfixed(p) => Some(*p),
                _ => None,
            })
            .collect()
    }

    /// Total length of the constant blocks.
    pub fn constant_len(&self) -> u64 {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Const(s) => s.chars().count() as u64,
                _ => 0,
            })
            .sum()
    }

    pub fn instantiate(
        &self,
        params: &BTreeMap<ParamId, u64>,
        parts: &BTreeMap<PartId, String>,
    ) -> Result<String, InstantiateError> {
        let mut out = String::new();
        for b in &self.blocks {
            match b {
                Block::Const(s) => out.push_str(s),
                Block::Power { base, param } => {
                    let n = params.get(param).ok_or(InstantiateError::UnmappedParam(*param))?;
                    for _ in 0..*n {
                        out.push_str(base);
                    }
                }
                Block::Unfixed(p) => out.push_str(parts.get(p).ok_or(InstantiateError::UnmappedPart(*p))?),
            }
        }
        Ok(out)
    }

    /// The language `{ instantiate(self, v) }` with every power block read
    /// as an independent star.
    pub fn to_regex(&self) -> Result<Regex, AutomataError> {
        let mut parts = Vec::new();
        for b in &self.blocks {
            parts.push(match b {
                Block::Const(s) => Regex::Lit(s.clone()),
                Block::Power { base, .. } => Regex::star(Regex::Lit(base.clone())),
                Block::Unfixed(_) => return Err(AutomataError::UnfixedPartPresent),
            });
        }
        Ok(match parts.len() {
            0 => Regex::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }
}

/// Free-standing form of [`ParamWord::instantiate`].
pub fn instantiate(
    pw: &ParamWord,
    params: &BTreeMap<ParamId, u64>,
    parts: &BTreeMap<PartId, String>,
) -> Result<String, InstantiateError> {
    pw.instantiate(params, parts)
}

impl fmt::Display for ParamWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "ε");
        }
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            match b {
                Block::Const(s) => write!(f, "{s}")?,
                Block::Power { base, param } if base.chars().count() == 1 => write!(f, "{base}^{param}")?,
                Block::Power { base, param } => write!(f, "({base})^{param}")?,
                Block::Unfixed(p) => write!(f, "{p}")?,
            }
        }
        Ok(())
    }
}

/// One parametric definition per string variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SolvedForm {
    pub equations: BTreeMap<String, ParamWord>,
}

impl SolvedForm {
    pub fn new(equations: BTreeMap<String, ParamWord>) -> Self {
        SolvedForm { equations }
    }

    pub fn get(&self, var: &str) -> Option<&ParamWord> {
        self.equations.get(var)
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.equations.keys().cloned().collect()
    }

    pub fn params(&self) -> BTreeSet<ParamId> {
        self.equations.values().flat_map(|w| w.params()).collect()
    }

    pub fn parts(&self) -> BTreeSet<PartId> {
        self.equations.values().flat_map(|w| w.parts()).collect()
    }

    /// Substitutes the definitions into a string term.
    pub fn apply(&self, t: &StrTerm) -> Option<ParamWord> {
        Some(match t {
            StrTerm::Lit(w) => ParamWord::constant(w),
            StrTerm::Var(v) => self.equations.get(v)?.clone(),
            StrTerm::Concat(ps) => {
                let mut acc = ParamWord::default();
                for p in ps {
                    acc = acc.concat(&self.apply(p)?);
                }
                acc
            }
        })
    }

    /// Values for every variable under a parameter and part valuation.
    pub fn instantiate_all(
        &self,
        params: &BTreeMap<ParamId, u64>,
        parts: &BTreeMap<PartId, String>,
    ) -> Result<BTreeMap<String, String>, InstantiateError> {
        self.equations.iter().map(|(x, w)| Ok((x.clone(), w.instantiate(params, parts)?))).collect()
    }

    /// Renders as word equations `X = t`. Unfixed parts become variables named
    /// after the part; power blocks become opaque variables such as `(ab)^i0`.
    pub fn render(&self) -> Vec<(StrTerm, StrTerm)> {
        self.equations
            .iter()
            .map(|(x, w)| {
                let parts = w
                    .blocks()
                    .iter()
                    .map(|b| match b {
                        Block::Const(s) => StrTerm::Lit(s.clone()),
                        Block::Power { base, param } => StrTerm::Var(format!("({base})^{param}")),
                        Block::Unfixed(p) => StrTerm::Var(p.to_string()),
                    })
                    .collect();
                (StrTerm::Var(x.clone()), StrTerm::concat(parts))
            })
            .collect()
    }

    /// Renumbers parameters and unfixed parts by first appearance.
    pub fn canonical(&self) -> SolvedForm {
        let mut params: BTreeMap<ParamId, ParamId> = BTreeMap::new();
        let mut parts: BTreeMap<PartId, PartId> = BTreeMap::new();
        let equations = self
            .equations
            .iter()
            .map(|(x, w)| {
                let blocks = w
                    .blocks()
                    .iter()
                    .map(|b| match b {
                        Block::Const(s) => Block::Const(s.clone()),
                        Block::Power { base, param } => {
                            let n = params.len() as u32;
                            Block::Power { base: base.clone(), param: *params.entry(*param).or_insert(ParamId(n)) }
                        }
                        Block::Unfixed(p) => {
                            let n = parts.len() as u32;
                            Block::Unfixed(*parts.entry(*p).or_insert(PartId(n)))
                        }
                    })
                    .collect();
                (x.clone(), ParamWord::new(blocks))
            })
            .collect();
        SolvedForm { equations }
    }
}

impl fmt::Display for SolvedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, w)) in self.equations.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{x} = {w}")?;
        }
        Ok(())
    }
}

/// True iff each equation is `X = t` with `X ∈ vars`, each variable of `vars`
/// is defined exactly once and no variable of `vars` occurs on a right-hand
/// side. Variables outside `vars` are read as unfixed parts.
pub fn is_solved_form(eqs: &[(StrTerm, StrTerm)], vars: &BTreeSet<String>) -> bool {
    let mut defined = BTreeSet::new();
    for (lhs, rhs) in eqs {
        let StrTerm::Var(x) = lhs else { return false };
        if !vars.contains(x) || !defined.insert(x.clone()) {
            return false;
        }
        let mut used = BTreeSet::new();
        rhs.collect_vars(&mut used);
        if used.iter().any(|v| vars.contains(v)) {
            return false;
        }
    }
    defined == *vars
}

/// DFA for the values `x` takes across all parameter valuations.
pub fn solved_form_language(sf: &SolvedForm, x: &str, sigma: &Alphabet) -> Result<Dfa, AutomataError> {
    let w = sf.get(x).cloned().unwrap_or_else(|| ParamWord::new(vec![Block::Unfixed(PartId(u32::MAX))]));
    regex_to_dfa(&w.to_regex()?, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_i_a() -> ParamWord {
        ParamWord::new(vec![Block::power("ab", ParamId(0)), Block::Const("a".into())])
    }

    #[test]
    fn instantiate_examples() {
        let one = BTreeMap::from([(ParamId(0), 1)]);
        assert_eq!(ab_i_a().instantiate(&one, &BTreeMap::new()).unwrap(), "aba");
        let w = ParamWord::new(vec![
            Block::Const("a".into()),
            Block::Unfixed(PartId(0)),
            Block::Const("b".into()),
            Block::Unfixed(PartId(1)),
            Block::Const("a".into()),
        ]);
        let parts = BTreeMap::from([(PartId(0), String::new()), (PartId(1), String::new())]);
        assert_eq!(w.instantiate(&BTreeMap::new(), &parts).unwrap(), "aba");
        let zero = BTreeMap::from([(ParamId(0), 0)]);
        assert_eq!(ab_i_a().instantiate(&zero, &BTreeMap::new()).unwrap(), "a");
        assert_eq!(
            ab_i_a().instantiate(&BTreeMap::new(), &BTreeMap::new()),
            Err(InstantiateError::UnmappedParam(ParamId(0)))
        );
    }

    #[test]
    fn constants_merge() {
        let w = ParamWord::new(vec![Block::Const("a".into()), Block::Const(String::new()), Block::Const("b".into())]);
        assert_eq!(w.blocks(), &[Block::Const("ab".into())]);
        assert_eq!(ab_i_a().to_string(), "(ab)^i0·a");
    }

    fn vars(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn solved_form_checks() {
        assert!(is_solved_form(&[(StrTerm::var("X"), StrTerm::lit("ab"))], &vars(&["X"])));
        let x_ab_y = (StrTerm::var("X"), StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("Y")]));
        assert!(!is_solved_form(&[x_ab_y, (StrTerm::var("Y"), StrTerm::lit("a"))], &vars(&["X", "Y"])));
        let ex1 = (
            StrTerm::var("X"),
            StrTerm::Concat(vec![
                StrTerm::lit("a"),
                StrTerm::var("Y"),
                StrTerm::lit("b"),
                StrTerm::var("Z"),
                StrTerm::lit("a"),
            ]),
        );
        assert!(!is_solved_form(std::slice::from_ref(&ex1), &vars(&["X", "Y", "Z"])));
        assert!(is_solved_form(&[ex1], &vars(&["X"])));
    }

    #[test]
    fn languages() {
        let s = Alphabet::default();
        let sf = SolvedForm::new(BTreeMap::from([
            ("X".to_string(), ab_i_a()),
            ("Y".to_string(), ParamWord::constant("ab")),
            ("Z".to_string(), ParamWord::new(vec![Block::power("a", ParamId(1))])),
            ("W".to_string(), ParamWord::new(vec![Block::Unfixed(PartId(0))])),
        ]));
        let x = solved_form_language(&sf, "X", &s).unwrap();
        let y = solved_form_language(&sf, "Y", &s).unwrap();
        let z = solved_form_language(&sf, "Z", &s).unwrap();
        for w in s.words_up_to(6) {
            let odd_ab = w.len() % 2 == 1 && w.chars().enumerate().all(|(i, c)| c == if i % 2 == 0 { 'a' } else { 'b' });
            assert_eq!(x.accepts(&w), odd_ab, "{w}");
            assert_eq!(y.accepts(&w), w == "ab");
            assert_eq!(z.accepts(&w), !w.contains('b'));
        }
        assert_eq!(solved_form_language(&sf, "W", &s), Err(AutomataError::UnfixedPartPresent));
    }
}
