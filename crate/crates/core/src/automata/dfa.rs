use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::syntax::Alphabet;

use super::AutomataError;

/// A total deterministic automaton over a fixed alphabet.
///
/// Letters are addressed by their index in the alphabet; `trans[q][k]` is the
/// successor of `q` on the `k`-th letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub(crate) alphabet: Alphabet,
    pub(crate) trans: Vec<Vec<usize>>,
    pub(crate) initial: usize,
    pub(crate) accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from explicit tables. Panics if the tables are not total.
    pub fn from_parts(
        alphabet: Alphabet,
        trans: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Self {
        let n = trans.len();
        assert_eq!(accepting.len(), n);
        assert!(initial < n);
        for row in &trans {
            assert_eq!(row.len(), alphabet.len());
            assert!(row.iter().all(|&t| t < n));
        }
        Dfa { alphabet, trans, initial, accepting }
    }

    /// The automaton accepting every word over `alphabet`.
    pub fn universal(alphabet: &Alphabet) -> Self {
        Dfa {
            alphabet: alphabet.clone(),
            trans: vec![vec![0; alphabet.len()]],
            initial: 0,
            accepting: vec![true],
        }
    }

    /// The automaton accepting exactly `word`.
    pub fn word(alphabet: &Alphabet, word: &str) -> Result<Self, AutomataError> {
        let letters: Vec<usize> = word
            .chars()
            .map(|c| alphabet.index_of(c).ok_or(AutomataError::LetterOutsideAlphabet(c)))
            .collect::<Result<_, _>>()?;
        let n = letters.len();
        let sink = n + 1;
        let mut trans = vec![vec![sink; alphabet.len()]; n + 2];
        for (i, &k) in letters.iter().enumerate() {
            trans[i][k] = i + 1;
        }
        let mut accepting = vec![false; n + 2];
        accepting[n] = true;
        Ok(Dfa { alphabet: alphabet.clone(), trans, initial: 0, accepting })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn step(&self, q: usize, c: char) -> Option<usize> {
        self.alphabet.index_of(c).map(|k| self.trans[q][k])
    }

    /// Runs `w` from `q`; `None` if `w` leaves the alphabet.
    pub fn run_from(&self, q: usize, w: &str) -> Option<usize> {
        w.chars().try_fold(q, |q, c| self.step(q, c))
    }

    pub fn accepts(&self, w: &str) -> bool {
        self.run_from(self.initial, w).is_some_and(|q| self.accepting[q])
    }

    /// Product automaton recognizing the intersection.
    pub fn intersect(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        self.product(other, |a, b| a && b)
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa, AutomataError> {
        self.product(other, |a, b| a || b)
    }

    fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa, AutomataError> {
        if self.alphabet != other.alphabet {
            return Err(AutomataError::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut order = vec![(self.initial, other.initial)];
        index.insert((self.initial, other.initial), 0);
        let mut trans = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let (p, q) = order[i];
            let mut row = Vec::with_capacity(k);
            for l in 0..k {
                let next = (self.trans[p][l], other.trans[q][l]);
                let id = *index.entry(next).or_insert_with(|| {
                    order.push(next);
                    order.len() - 1
                });
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        let accepting = order.iter().map(|&(p, q)| accept(self.accepting[p], other.accepting[q])).collect();
        Ok(Dfa { alphabet: self.alphabet.clone(), trans, initial: 0, accepting })
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        out.accepting.iter_mut().for_each(|a| *a = !*a);
        out
    }

    /// Shortlex-least accepted word, or `None` when the language is empty.
    pub fn shortest_witness(&self) -> Option<String> {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        seen[self.initial] = true;
        queue.push_back(self.initial);
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut letters = Vec::new();
                let mut cur = q;
                while let Some((p, l)) = parent[cur] {
                    letters.push(self.alphabet.letters()[l]);
                    cur = p;
                }
                letters.reverse();
                return Some(letters.into_iter().collect());
            }
            for (l, &t) in self.trans[q].iter().enumerate() {
                if !seen[t] {
                    seen[t] = true;
                    parent[t] = Some((q, l));
                    queue.push_back(t);
                }
            }
        }
        None
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_witness().is_none()
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.initial];
        seen[self.initial] = true;
        while let Some(q) = stack.pop() {
            for &t in &self.trans[q] {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// The same automaton re-expressed over a larger alphabet; new letters
    /// lead to a rejecting sink.
    pub fn extend_alphabet(&self, sigma: &Alphabet) -> Result<Dfa, AutomataError> {
        if let Some(&c) = self.alphabet.letters().iter().find(|&&c| !sigma.contains(c)) {
            return Err(AutomataError::LetterOutsideAlphabet(c));
        }
        let sink = self.num_states();
        let mut trans = Vec::with_capacity(sink + 1);
        for row in &self.trans {
            trans.push(
                sigma
                    .letters()
                    .iter()
                    .map(|&c| self.alphabet.index_of(c).map_or(sink, |k| row[k]))
                    .collect(),
            );
        }
        trans.push(vec![sink; sigma.len()]);
        let mut accepting = self.accepting.clone();
        accepting.push(false);
        Ok(Dfa { alphabet: sigma.clone(), trans, initial: self.initial, accepting })
    }

    /// Moore-style partition refinement; unreachable states are dropped.
    /// Used to keep products and regex round trips small.
    pub fn minimized(&self) -> Dfa {
        let reach = self.reachable();
        let live: Vec<usize> = (0..self.num_states()).filter(|&q| reach[q]).collect();
        let mut class: Vec<usize> = vec![0; self.num_states()];
        for &q in &live {
            class[q] = usize::from(self.accepting[q]);
        }
        let mut count = live.iter().map(|&q| class[q]).collect::<BTreeSet<_>>().len();
        loop {
            let mut sig_index: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut next = vec![0; self.num_states()];
            for &q in &live {
                let sig = (class[q], self.trans[q].iter().map(|&t| class[t]).collect::<Vec<_>>());
                let len = sig_index.len();
                next[q] = *sig_index.entry(sig).or_insert(len);
            }
            let new_count = sig_index.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // renumber so the initial state's class comes first, in BFS order
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![self.initial];
        remap.insert(class[self.initial], 0);
        let mut trans = Vec::new();
        let mut accepting = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            accepting.push(self.accepting[q]);
            let mut row = Vec::new();
            for &t in &self.trans[q] {
                let len = remap.len();
                let id = *remap.entry(class[t]).or_insert_with(|| {
                    order.push(t);
                    len
                });
                row.push(id);
            }
            trans.push(row);
            i += 1;
        }
        Dfa { alphabet: self.alphabet.clone(), trans, initial: 0, accepting }
    }
}

/// Intersection of two automata over the same alphabet.
pub fn dfa_intersect(a: &Dfa, b: &Dfa) -> Result<Dfa, AutomataError> {
    a.intersect(b)
}

pub fn dfa_complement(a: &Dfa) -> Dfa {
    a.complement()
}

/// Emptiness test; the witness is the shortlex-least accepted word.
pub fn dfa_is_empty(a: &Dfa) -> (bool, Option<String>) {
    let w = a.shortest_witness();
    (w.is_none(), w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_automaton() {
        let s = Alphabet::default();
        let d = Dfa::word(&s, "ab").unwrap();
        assert!(d.accepts("ab"));
        assert!(!d.accepts("a"));
        assert!(!d.accepts("abb"));
        assert!(!d.accepts("ac"));
    }

    #[test]
    fn complement_of_universal_is_empty() {
        let s = Alphabet::default();
        assert!(Dfa::universal(&s).complement().is_empty());
    }

    #[test]
    fn alphabet_mismatch() {
        let a = Dfa::universal(&Alphabet::default());
        let b = Dfa::universal(&Alphabet::new("abc".chars()));
        assert_eq!(a.intersect(&b), Err(AutomataError::AlphabetMismatch));
    }

    #[test]
    fn minimization_preserves_language() {
        let s = Alphabet::default();
        let d = Dfa::word(&s, "ab").unwrap().union(&Dfa::word(&s, "b").unwrap()).unwrap();
        let m = d.minimized();
        for w in s.words_up_to(4) {
            assert_eq!(d.accepts(&w), m.accepts(&w), "{w}");
        }
        assert!(m.num_states() <= d.num_states());
    }
}
