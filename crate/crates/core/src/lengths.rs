//! Linear length constraints implied by solved forms, and the translation of
//! length atoms and length sets into linear rows.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::automata::UPSet;
use crate::solved_form::{Block, ParamId, PartId, SolvedForm};
use crate::syntax::{LenTerm, StrTerm};

/// An integer unknown of a linear system. All of them range over the naturals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinVar {
    LenOf(String),
    ParamOf(ParamId),
    PartLenOf(PartId),
    /// Multiplier introduced for an arithmetic progression.
    FreshAp(u32),
    ProblemInt(String),
}

impl fmt::Display for LinVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinVar::LenOf(x) => write!(f, "len({x})"),
            LinVar::ParamOf(p) => write!(f, "{p}"),
            LinVar::PartLenOf(p) => write!(f, "len({p})"),
            LinVar::FreshAp(k) => write!(f, "k{k}"),
            LinVar::ProblemInt(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Le,
}

/// `Σ coeffs·v (= | ≤) bound`. An empty coefficient map is a constant row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinRow {
    pub coeffs: BTreeMap<LinVar, i64>,
    pub rel: Rel,
    pub bound: i64,
}

impl LinRow {
    pub fn new(coeffs: impl IntoIterator<Item = (LinVar, i64)>, rel: Rel, bound: i64) -> Self {
        let mut map: BTreeMap<LinVar, i64> = BTreeMap::new();
        for (v, c) in coeffs {
            *map.entry(v).or_default() += c;
        }
        map.retain(|_, c| *c != 0);
        LinRow { coeffs: map, rel, bound }
    }

    pub fn eq(coeffs: impl IntoIterator<Item = (LinVar, i64)>, bound: i64) -> Self {
        Self::new(coeffs, Rel::Eq, bound)
    }

    pub fn le(coeffs: impl IntoIterator<Item = (LinVar, i64)>, bound: i64) -> Self {
        Self::new(coeffs, Rel::Le, bound)
    }

    /// Evaluates the row; unmapped variables read as 0.
    pub fn holds(&self, values: &BTreeMap<LinVar, u64>) -> bool {
        let lhs: i128 = self
            .coeffs
            .iter()
            .map(|(v, c)| *c as i128 * values.get(v).copied().unwrap_or(0) as i128)
            .sum();
        match self.rel {
            Rel::Eq => lhs == self.bound as i128,
            Rel::Le => lhs <= self.bound as i128,
        }
    }
}

impl fmt::Display for LinRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        for (i, (v, c)) in self.coeffs.iter().enumerate() {
            match (i, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if c.unsigned_abs() != 1 {
                write!(f, "{}·", c.unsigned_abs())?;
            }
            write!(f, "{v}")?;
        }
        let rel = match self.rel {
            Rel::Eq => "=",
            Rel::Le => "≤",
        };
        write!(f, " {rel} {}", self.bound)
    }
}

/// A conjunction of rows over natural-number unknowns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinSystem {
    pub rows: Vec<LinRow>,
}

impl LinSystem {
    pub fn new(rows: Vec<LinRow>) -> Self {
        LinSystem { rows }
    }

    pub fn push(&mut self, row: LinRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = LinRow>) {
        self.rows.extend(rows);
    }

    pub fn holds(&self, values: &BTreeMap<LinVar, u64>) -> bool {
        self.rows.iter().all(|r| r.holds(values))
    }

    pub fn vars(&self) -> std::collections::BTreeSet<LinVar> {
        self.rows.iter().flat_map(|r| r.coeffs.keys().cloned()).collect()
    }
}

impl fmt::Display for LinSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthError {
    #[error("coefficient overflow while linearizing a length term")]
    CoefficientOverflow,
}

/// One row per defined variable:
/// `len(X) - Σ |u_r|·i_r - Σ len(y) = C`, where `C` counts the constant letters.
pub fn implied_length_constraints(sf: &SolvedForm) -> LinSystem {
    let rows = sf
        .equations
        .iter()
        .map(|(x, w)| {
            let mut coeffs = vec![(LinVar::LenOf(x.clone()), 1i64)];
            let mut constant = 0i64;
            for b in w.blocks() {
                match b {
                    Block::Const(s) => constant += s.chars().count() as i64,
                    Block::Power { base, param } => {
                        coeffs.push((LinVar::ParamOf(*param), -(base.chars().count() as i64)))
                    }
                    Block::Unfixed(p) => coeffs.push((LinVar::PartLenOf(*p), -1)),
                }
            }
            LinRow::eq(coeffs, constant)
        })
        .collect();
    LinSystem::new(rows)
}

fn add_str(t: &StrTerm, scale: i64, coeffs: &mut Vec<(LinVar, i64)>, constant: &mut i64) -> Result<(), LengthError> {
    match t {
        StrTerm::Lit(w) => {
            let n = (w.chars().count() as i64).checked_mul(scale).ok_or(LengthError::CoefficientOverflow)?;
            *constant = constant.checked_add(n).ok_or(LengthError::CoefficientOverflow)?;
        }
        StrTerm::Var(x) => coeffs.push((LinVar::LenOf(x.clone()), scale)),
        StrTerm::Concat(ps) => {
            for p in ps {
                add_str(p, scale, coeffs, constant)?;
            }
        }
    }
    Ok(())
}

fn add_len(t: &LenTerm, scale: i64, coeffs: &mut Vec<(LinVar, i64)>, constant: &mut i64) -> Result<(), LengthError> {
    match t {
        LenTerm::IntConst(n) => {
            let n = n.checked_mul(scale).ok_or(LengthError::CoefficientOverflow)?;
            *constant = constant.checked_add(n).ok_or(LengthError::CoefficientOverflow)?;
        }
        LenTerm::IntVar(n) => coeffs.push((LinVar::ProblemInt(n.clone()), scale)),
        LenTerm::Len(s) => add_str(s, scale, coeffs, constant)?,
        LenTerm::Sum(ts) => {
            for (c, t) in ts {
                add_len(t, c.checked_mul(scale).ok_or(LengthError::CoefficientOverflow)?, coeffs, constant)?;
            }
        }
    }
    Ok(())
}

/// Linearizes `t ≤ c` over `len(X)` and problem integer variables.
pub fn translate_len_atom(t: &LenTerm, c: i64) -> Result<LinRow, LengthError> {
    let mut coeffs = Vec::new();
    let mut constant = 0i64;
    add_len(t, 1, &mut coeffs, &mut constant)?;
    let bound = c.checked_sub(constant).ok_or(LengthError::CoefficientOverflow)?;
    let mut merged: BTreeMap<LinVar, i64> = BTreeMap::new();
    for (v, k) in coeffs {
        let e = merged.entry(v).or_default();
        *e = e.checked_add(k).ok_or(LengthError::CoefficientOverflow)?;
    }
    Ok(LinRow::le(merged, bound))
}

/// One alternative per progression of `s`: `(o, p)` gives `x - p·k = o` with a
/// fresh multiplier `k`, or `x = o` when `p = 0`. An empty set gives no
/// alternatives at all.
pub fn upset_to_rows(x: &LinVar, s: &UPSet, next_fresh: &mut u32) -> Vec<Vec<LinRow>> {
    s.progressions()
        .iter()
        .map(|prog| {
            let offset = prog.offset as i64;
            if prog.period == 0 {
                vec![LinRow::eq([(x.clone(), 1)], offset)]
            } else {
                let k = LinVar::FreshAp(*next_fresh);
                *next_fresh += 1;
                vec![LinRow::eq([(x.clone(), 1), (k, -(prog.period as i64))], offset)]
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::Progression;
    use crate::solved_form::ParamWord;

    fn len(x: &str) -> LinVar {
        LinVar::LenOf(x.into())
    }

    #[test]
    fn ab_power_a() {
        let sf = SolvedForm::new(BTreeMap::from([(
            "X".to_string(),
            ParamWord::new(vec![Block::power("ab", ParamId(0)), Block::Const("a".into())]),
        )]));
        let sys = implied_length_constraints(&sf);
        assert_eq!(sys.rows, vec![LinRow::eq([(len("X"), 1), (LinVar::ParamOf(ParamId(0)), -2)], 1)]);
    }

    #[test]
    fn unfixed_parts_count_constants() {
        let w = ParamWord::new(vec![
            Block::Const("a".into()),
            Block::Unfixed(PartId(0)),
            Block::Const("b".into()),
            Block::Unfixed(PartId(1)),
            Block::Const("a".into()),
        ]);
        let sys = implied_length_constraints(&SolvedForm::new(BTreeMap::from([("X".to_string(), w)])));
        assert_eq!(
            sys.rows,
            vec![LinRow::eq(
                [(len("X"), 1), (LinVar::PartLenOf(PartId(0)), -1), (LinVar::PartLenOf(PartId(1)), -1)],
                3
            )]
        );
    }

    #[test]
    fn length_atoms() {
        let row = translate_len_atom(&LenTerm::Len(StrTerm::var("X")), 3).unwrap();
        assert_eq!(row, LinRow::le([(len("X"), 1)], 3));
        let row = translate_len_atom(&LenTerm::Len(StrTerm::var("Y")).negated(), -2).unwrap();
        assert_eq!(row, LinRow::le([(len("Y"), -1)], -2));
        let row = translate_len_atom(&LenTerm::IntConst(0), 0).unwrap();
        assert!(row.coeffs.is_empty() && row.holds(&BTreeMap::new()));
        let t = LenTerm::Sum(vec![
            (1, LenTerm::Len(StrTerm::Concat(vec![StrTerm::lit("ab"), StrTerm::var("X")]))),
            (-1, LenTerm::Len(StrTerm::var("X"))),
            (2, LenTerm::IntVar("n".into())),
        ]);
        assert_eq!(translate_len_atom(&t, 5).unwrap(), LinRow::le([(LinVar::ProblemInt("n".into()), 2)], 3));
    }

    #[test]
    fn overflow_is_reported() {
        let t = LenTerm::Sum(vec![(i64::MAX, LenTerm::Sum(vec![(2, LenTerm::IntVar("n".into()))]))]);
        assert_eq!(translate_len_atom(&t, 0), Err(LengthError::CoefficientOverflow));
    }

    #[test]
    fn progressions_to_rows() {
        let mut fresh = 0;
        let odd = UPSet::from_progressions([Progression::new(1, 2)]);
        assert_eq!(
            upset_to_rows(&len("X"), &odd, &mut fresh),
            vec![vec![LinRow::eq([(len("X"), 1), (LinVar::FreshAp(0), -2)], 1)]]
        );
        assert!(upset_to_rows(&len("X"), &UPSet::empty(), &mut fresh).is_empty());
        assert_eq!(
            upset_to_rows(&len("X"), &UPSet::singleton(0), &mut fresh),
            vec![vec![LinRow::eq([(len("X"), 1)], 0)]]
        );
    }
}
