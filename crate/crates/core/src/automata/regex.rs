use std::collections::{BTreeSet, HashMap};

use crate::syntax::{Alphabet, Regex};

use super::{AutomataError, Dfa};

/// Thompson automaton with ε-moves. Letters are alphabet indices.
#[derive(Debug, Clone)]
pub struct Nfa {
    pub(crate) eps: Vec<Vec<usize>>,
    pub(crate) trans: Vec<Vec<(usize, usize)>>,
    pub(crate) initial: usize,
    pub(crate) accept: usize,
}

impl Nfa {
    fn add_state(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.trans.push(Vec::new());
        self.eps.len() - 1
    }

    pub fn from_regex(r: &Regex, sigma: &Alphabet) -> Result<Nfa, AutomataError> {
        let mut nfa = Nfa { eps: Vec::new(), trans: Vec::new(), initial: 0, accept: 0 };
        let (s, t) = nfa.build(r, sigma)?;
        nfa.initial = s;
        nfa.accept = t;
        Ok(nfa)
    }

    fn build(&mut self, r: &Regex, sigma: &Alphabet) -> Result<(usize, usize), AutomataError> {
        match r {
            Regex::Lit(w) => {
                let s = self.add_state();
                let mut cur = s;
                for c in w.chars() {
                    let k = sigma.index_of(c).ok_or(AutomataError::LetterOutsideAlphabet(c))?;
                    let n = self.add_state();
                    self.trans[cur].push((k, n));
                    cur = n;
                }
                Ok((s, cur))
            }
            Regex::Epsilon => {
                let s = self.add_state();
                Ok((s, s))
            }
            Regex::Concat(rs) => {
                let s = self.add_state();
                let mut cur = s;
                for r in rs {
                    let (a, b) = self.build(r, sigma)?;
                    self.eps[cur].push(a);
                    cur = b;
                }
                Ok((s, cur))
            }
            Regex::Union(rs) => {
                let s = self.add_state();
                let t = self.add_state();
                for r in rs {
                    let (a, b) = self.build(r, sigma)?;
                    self.eps[s].push(a);
                    self.eps[b].push(t);
                }
                Ok((s, t))
            }
            Regex::Star(inner) => {
                let s = self.add_state();
                let (a, b) = self.build(inner, sigma)?;
                self.eps[s].push(a);
                self.eps[b].push(s);
                Ok((s, s))
            }
        }
    }

    fn closure(&self, set: &mut BTreeSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(q) = stack.pop() {
            for &t in &self.eps[q] {
                if set.insert(t) {
                    stack.push(t);
                }
            }
        }
    }

    /// Subset construction.
    pub fn determinize(&self, sigma: &Alphabet) -> Dfa {
        let mut start = BTreeSet::from([self.initial]);
        self.closure(&mut start);
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut order = vec![start.clone()];
        index.insert(start, 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let cur = order[i].clone();
            let mut row = Vec::with_capacity(sigma.len());
            for k in 0..sigma.len() {
                let mut next = BTreeSet::new();
                for &q in &cur {
                    for &(l, t) in &self.trans[q] {
                        if l == k {
                            next.insert(t);
                        }
                    }
                }
                self.closure(&mut next);
                let len = index.len();
                let id = *index.entry(next.clone()).or_insert_with(|| {
                    order.push(next);
                    len
                });
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let accepting = order.iter().map(|s| s.contains(&self.accept)).collect();
        Dfa { alphabet: sigma.clone(), trans, initial: 0, accepting }
    }
}

/// Compiles `r` into a total DFA over `sigma`.
pub fn regex_to_dfa(r: &Regex, sigma: &Alphabet) -> Result<Dfa, AutomataError> {
    Ok(Nfa::from_regex(r, sigma)?.determinize(sigma).minimized())
}

fn re_union(parts: Vec<Regex>) -> Regex {
    let mut flat: Vec<Regex> = Vec::new();
    for p in parts {
        match p {
            Regex::Union(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    flat.sort();
    flat.dedup();
    match flat.len() {
        1 => flat.pop().unwrap(),
        _ => Regex::Union(flat),
    }
}

fn re_concat(parts: Vec<Regex>) -> Regex {
    let mut flat: Vec<Regex> = Vec::new();
    for p in parts {
        match p {
            Regex::Union(ref u) if u.is_empty() => return Regex::none(),
            Regex::Epsilon => {}
            Regex::Lit(ref w) if w.is_empty() => {}
            Regex::Concat(inner) => flat.extend(inner),
            other => flat.push(other),
        }
    }
    // adjacent literals fuse
    let mut fused: Vec<Regex> = Vec::new();
    for p in flat {
        match (fused.last_mut(), p) {
            (Some(Regex::Lit(a)), Regex::Lit(b)) => a.push_str(&b),
            (_, p) => fused.push(p),
        }
    }
    match fused.len() {
        0 => Regex::Epsilon,
        1 => fused.pop().unwrap(),
        _ => Regex::Concat(fused),
    }
}

fn re_star(r: Regex) -> Regex {
    match r {
        Regex::Union(ref u) if u.is_empty() => Regex::Epsilon,
        Regex::Epsilon => Regex::Epsilon,
        s @ Regex::Star(_) => s,
        other => Regex::Star(Box::new(other)),
    }
}

/// State elimination. The result is well formed for the printer: every
/// `Concat`/`Union` node has at least two children except the empty union.
pub fn dfa_to_regex(d: &Dfa) -> Regex {
    let d = d.minimized();
    let n = d.num_states();
    // states 0..n, plus a fresh start n and a fresh final n+1
    let total = n + 2;
    let (start, fin) = (n, n + 1);
    let mut edge: Vec<Vec<Option<Regex>>> = vec![vec![None; total]; total];
    let add = |edge: &mut Vec<Vec<Option<Regex>>>, p: usize, q: usize, r: Regex| {
        let cur = edge[p][q].take();
        edge[p][q] = Some(match cur {
            None => r,
            Some(c) => re_union(vec![c, r]),
        });
    };
    for p in 0..n {
        for (k, &q) in d.trans[p].iter().enumerate() {
            let c = d.alphabet.letters()[k];
            add(&mut edge, p, q, Regex::Lit(c.to_string()));
        }
        if d.accepting[p] {
            add(&mut edge, p, fin, Regex::Epsilon);
        }
    }
    add(&mut edge, start, d.initial, Regex::Epsilon);
    for k in 0..n {
        let self_loop = edge[k][k].take().map(re_star).unwrap_or(Regex::Epsilon);
        let ins: Vec<(usize, Regex)> =
            (0..total).filter(|&p| p != k).filter_map(|p| edge[p][k].take().map(|r| (p, r))).collect();
        let outs: Vec<(usize, Regex)> =
            (0..total).filter(|&q| q != k).filter_map(|q| edge[k][q].take().map(|r| (q, r))).collect();
        for (p, rin) in &ins {
            for (q, rout) in &outs {
                let r = re_concat(vec![rin.clone(), self_loop.clone(), rout.clone()]);
                add(&mut edge, *p, *q, r);
            }
        }
    }
    edge[start][fin].take().unwrap_or_else(Regex::none)
}

/// Regex for the complement of `r` relative to `sigma*`.
pub fn complement_regex(r: &Regex, sigma: &Alphabet) -> Result<Regex, AutomataError> {
    Ok(dfa_to_regex(&regex_to_dfa(r, sigma)?.complement()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_ba_ab_star_a() -> Regex {
        Regex::Concat(vec![
            Regex::Union(vec![Regex::lit("ab"), Regex::lit("ba")]),
            Regex::star(Regex::lit("ab")),
            Regex::lit("a"),
        ])
    }

    #[test]
    fn example_three_membership() {
        let d = regex_to_dfa(&ab_ba_ab_star_a(), &Alphabet::default()).unwrap();
        assert!(d.accepts("aba"));
        assert!(d.accepts("ababa"));
        assert!(d.accepts("baa"));
        assert!(!d.accepts("ab"));
        assert!(!d.accepts(""));
    }

    #[test]
    fn epsilon_language() {
        let s = Alphabet::default();
        let d = regex_to_dfa(&Regex::Epsilon, &s).unwrap();
        assert!(d.accepts(""));
        for w in s.words_up_to(3).into_iter().skip(1) {
            assert!(!d.accepts(&w));
        }
    }

    #[test]
    fn letter_outside_alphabet() {
        let err = regex_to_dfa(&Regex::lit("ac"), &Alphabet::default()).unwrap_err();
        assert_eq!(err, AutomataError::LetterOutsideAlphabet('c'));
    }

    #[test]
    fn state_elimination_roundtrip() {
        let s = Alphabet::default();
        let r = ab_ba_ab_star_a();
        let d = regex_to_dfa(&r, &s).unwrap();
        let back = regex_to_dfa(&dfa_to_regex(&d), &s).unwrap();
        for w in s.words_up_to(6) {
            assert_eq!(d.accepts(&w), back.accepts(&w), "{w}");
        }
    }

    #[test]
    fn complement_of_everything_is_none() {
        let s = Alphabet::default();
        let all = Regex::star(Regex::Union(vec![Regex::lit("a"), Regex::lit("b")]));
        assert_eq!(complement_regex(&all, &s).unwrap(), Regex::none());
    }
}
