use std::collections::{BTreeMap, HashMap};

use crate::solved_form::{Block, ParamId, ParamWord};

use super::{AutomataError, Dfa, Progression, UPSet};

/// A finite union of boxes; each box constrains every parameter of the
/// analyzed word to an ultimately periodic set.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParamConstraintSet {
    pub boxes: Vec<BTreeMap<ParamId, UPSet>>,
}

impl ParamConstraintSet {
    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    /// True when `valuation` lies in some box. Parameters missing from the
    /// valuation read as 0.
    pub fn contains(&self, valuation: &BTreeMap<ParamId, u64>) -> bool {
        self.boxes.iter().any(|b| {
            b.iter().all(|(p, s)| s.contains(valuation.get(p).copied().unwrap_or(0)))
        })
    }
}

/// The residue classes of one parameter together with the state map each
/// class induces on every base the parameter exponentiates.
struct ParamClasses {
    classes: Vec<(UPSet, Vec<Vec<usize>>)>,
}

fn word_map(d: &Dfa, base: &str) -> Result<Vec<usize>, AutomataError> {
    (0..d.num_states())
        .map(|q| {
            base.chars().try_fold(q, |q, c| {
                d.step(q, c).ok_or(AutomataError::LetterOutsideAlphabet(c))
            })
        })
        .collect()
}

fn compose(first: &[usize], then: &[usize]) -> Vec<usize> {
    first.iter().map(|&q| then[q]).collect()
}

fn classes_for(d: &Dfa, bases: &[String]) -> Result<ParamClasses, AutomataError> {
    let steps: Vec<Vec<usize>> = bases.iter().map(|b| word_map(d, b)).collect::<Result<_, _>>()?;
    let identity: Vec<usize> = (0..d.num_states()).collect();
    let mut cur: Vec<Vec<usize>> = vec![identity; bases.len()];
    let mut seen: HashMap<Vec<Vec<usize>>, u64> = HashMap::new();
    let mut history: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut i = 0u64;
    let (pre, period) = loop {
        if let Some(&first) = seen.get(&cur) {
            break (first, i - first);
        }
        seen.insert(cur.clone(), i);
        history.push(cur.clone());
        cur = cur.iter().zip(&steps).map(|(m, s)| compose(m, s)).collect();
        i += 1;
    };
    let classes = history
        .into_iter()
        .enumerate()
        .map(|(j, maps)| {
            let j = j as u64;
            let set = if j < pre {
                UPSet::singleton(j)
            } else {
                UPSet::from_progressions([Progression::new(j, period)])
            };
            (set, maps)
        })
        .collect();
    Ok(ParamClasses { classes })
}

/// Parameter valuations `v` for which `instantiate(w, v) ∈ L(d)`.
///
/// Each parameter's exponentiated state maps `q ↦ δ*(q, u^i)` form an
/// eventually periodic sequence in `i`; one box is emitted per accepted
/// combination of residue classes. A parameter may occur in several blocks.
pub fn param_membership(w: &ParamWord, d: &Dfa) -> Result<ParamConstraintSet, AutomataError> {
    if w.has_unfixed() {
        return Err(AutomataError::UnfixedPartPresent);
    }
    let mut bases: BTreeMap<ParamId, Vec<String>> = BTreeMap::new();
    for b in w.blocks() {
        if let Block::Power { base, param } = b {
            let e = bases.entry(*param).or_default();
            if !e.contains(base) {
                e.push(base.clone());
            }
        }
    }
    let params: Vec<ParamId> = bases.keys().copied().collect();
    let per_param: Vec<ParamClasses> =
        params.iter().map(|p| classes_for(d, &bases[p])).collect::<Result<_, _>>()?;
    let mut boxes: Vec<BTreeMap<ParamId, UPSet>> = Vec::new();
    let mut choice = vec![0usize; params.len()];
    loop {
        let mut q = d.initial();
        for b in w.blocks() {
            q = match b {
                Block::Const(s) => d.run_from(q, s).ok_or_else(|| {
                    AutomataError::LetterOutsideAlphabet(
                        s.chars().find(|&c| !d.alphabet().contains(c)).unwrap_or('?'),
                    )
                })?,
                Block::Power { base, param } => {
                    let pi = params.iter().position(|p| p == param).unwrap();
                    let bi = bases[param].iter().position(|x| x == base).unwrap();
                    per_param[pi].classes[choice[pi]].1[bi][q]
                }
                Block::Unfixed(_) => unreachable!(),
            };
        }
        if d.is_accepting(q) {
            boxes.push(
                params
                    .iter()
                    .enumerate()
                    .map(|(pi, p)| (*p, per_param[pi].classes[choice[pi]].0.clone()))
                    .collect(),
            );
        }
        // odometer over class choices
        let mut k = 0;
        loop {
            if k == params.len() {
                return Ok(ParamConstraintSet { boxes: merge_boxes(boxes) });
            }
            choice[k] += 1;
            if choice[k] < per_param[k].classes.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Unions boxes that differ in at most one coordinate.
fn merge_boxes(mut boxes: Vec<BTreeMap<ParamId, UPSet>>) -> Vec<BTreeMap<ParamId, UPSet>> {
    loop {
        let mut merged = None;
        'search: for i in 0..boxes.len() {
            for j in i + 1..boxes.len() {
                let diff: Vec<&ParamId> =
                    boxes[i].keys().filter(|k| boxes[i][*k] != boxes[j][*k]).collect();
                if diff.len() <= 1 {
                    merged = Some((i, j, diff.first().map(|k| **k)));
                    break 'search;
                }
            }
        }
        match merged {
            None => return boxes,
            Some((i, j, key)) => {
                let other = boxes.remove(j);
                if let Some(k) = key {
                    let u = boxes[i][&k].union(&other[&k]);
                    boxes[i].insert(k, u);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::regex_to_dfa;
    use crate::syntax::{Alphabet, Regex};

    fn ab_i_a() -> ParamWord {
        ParamWord::new(vec![Block::power("ab", ParamId(0)), Block::Const("a".into())])
    }

    #[test]
    fn section_five_counterexample_is_empty() {
        let d = regex_to_dfa(
            &Regex::Concat(vec![Regex::star(Regex::lit("ab")), Regex::lit("b")]),
            &Alphabet::default(),
        )
        .unwrap();
        assert!(param_membership(&ab_i_a(), &d).unwrap().is_empty());
    }

    #[test]
    fn example_three_regex_needs_one_repetition() {
        let r = Regex::Concat(vec![
            Regex::Union(vec![Regex::lit("ab"), Regex::lit("ba")]),
            Regex::star(Regex::lit("ab")),
            Regex::lit("a"),
        ]);
        let d = regex_to_dfa(&r, &Alphabet::default()).unwrap();
        let set = param_membership(&ab_i_a(), &d).unwrap();
        assert_eq!(set.boxes.len(), 1);
        assert_eq!(set.boxes[0][&ParamId(0)], UPSet::from_progressions([Progression::new(1, 1)]));
        // brute force i ≤ 10
        for i in 0..=10u64 {
            let v = BTreeMap::from([(ParamId(0), i)]);
            let word = ab_i_a().instantiate(&v, &BTreeMap::new()).unwrap();
            assert_eq!(set.contains(&v), d.accepts(&word));
            assert_eq!(set.contains(&v), i >= 1);
        }
    }

    #[test]
    fn universal_parameter() {
        let d = regex_to_dfa(&Regex::star(Regex::lit("a")), &Alphabet::default()).unwrap();
        let w = ParamWord::new(vec![Block::power("a", ParamId(3))]);
        let set = param_membership(&w, &d).unwrap();
        assert_eq!(set.boxes, vec![BTreeMap::from([(ParamId(3), UPSet::naturals())])]);
    }

    #[test]
    fn unfixed_part_rejected() {
        let d = Dfa::universal(&Alphabet::default());
        let w = ParamWord::new(vec![Block::Unfixed(crate::solved_form::PartId(0))]);
        assert_eq!(param_membership(&w, &d), Err(AutomataError::UnfixedPartPresent));
    }

    #[test]
    fn repeated_parameter() {
        // (ab)^i a (ab)^i a ∈ (ab)*a(ab)*a holds for all i; ∈ (abab)* a... only parity matters
        let w = ParamWord::new(vec![
            Block::power("a", ParamId(0)),
            Block::Const("b".into()),
            Block::power("a", ParamId(0)),
        ]);
        // a^i b a^i with an even total number of a's: always true
        let r = Regex::Concat(vec![
            Regex::star(Regex::lit("aa")),
            Regex::Union(vec![
                Regex::Concat(vec![Regex::lit("b"), Regex::star(Regex::lit("aa"))]),
                Regex::Concat(vec![Regex::lit("aba"), Regex::star(Regex::lit("aa"))]),
            ]),
        ]);
        let d = regex_to_dfa(&r, &Alphabet::default()).unwrap();
        let set = param_membership(&w, &d).unwrap();
        for i in 0..=8u64 {
            let v = BTreeMap::from([(ParamId(0), i)]);
            let word = w.instantiate(&v, &BTreeMap::new()).unwrap();
            assert_eq!(set.contains(&v), d.accepts(&word), "i={i}");
        }
    }
}
