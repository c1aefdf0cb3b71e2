use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::Dfa;

/// `{offset + period·k : k ≥ 0}`; period 0 is the singleton `{offset}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Progression {
    pub offset: u64,
    pub period: u64,
}

impl Progression {
    pub fn new(offset: u64, period: u64) -> Self {
        Progression { offset, period }
    }

    pub fn singleton(n: u64) -> Self {
        Progression { offset: n, period: 0 }
    }

    pub fn contains(&self, n: u64) -> bool {
        if self.period == 0 {
            n == self.offset
        } else {
            n >= self.offset && (n - self.offset).is_multiple_of(self.period)
        }
    }

    /// True when every element of `other` is in `self`.
    pub fn subsumes(&self, other: &Progression) -> bool {
        if !self.contains(other.offset) {
            return false;
        }
        match (self.period, other.period) {
            (_, 0) => true,
            (0, _) => false,
            (p, q) => q % p == 0,
        }
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.period == 0 {
            write!(f, "{}", self.offset)
        } else {
            write!(f, "{}+{}k", self.offset, self.period)
        }
    }
}

/// Ultimately periodic set of naturals, kept as a normalized finite union of
/// arithmetic progressions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct UPSet {
    progs: Vec<Progression>,
}

impl UPSet {
    pub fn empty() -> Self {
        UPSet { progs: Vec::new() }
    }

    /// All naturals.
    pub fn naturals() -> Self {
        UPSet { progs: vec![Progression::new(0, 1)] }
    }

    pub fn from_progressions(progs: impl IntoIterator<Item = Progression>) -> Self {
        let mut s = UPSet { progs: progs.into_iter().collect() };
        s.normalize();
        s
    }

    pub fn singleton(n: u64) -> Self {
        UPSet { progs: vec![Progression::singleton(n)] }
    }

    pub fn progressions(&self) -> &[Progression] {
        &self.progs
    }

    pub fn is_empty(&self) -> bool {
        self.progs.is_empty()
    }

    pub fn contains(&self, n: u64) -> bool {
        self.progs.iter().any(|p| p.contains(n))
    }

    pub fn union(&self, other: &UPSet) -> UPSet {
        UPSet::from_progressions(self.progs.iter().chain(other.progs.iter()).copied())
    }

    /// Elements up to and including `bound`.
    pub fn elements_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&n| self.contains(n)).collect()
    }

    fn normalize(&mut self) {
        let mut set: BTreeSet<Progression> = self.progs.drain(..).collect();
        loop {
            let before = set.clone();
            // congruent offsets with a shared period collapse to the smallest
            let mut by_class: HashMap<(u64, u64), u64> = HashMap::new();
            for p in set.iter().filter(|p| p.period > 0) {
                let key = (p.period, p.offset % p.period);
                let e = by_class.entry(key).or_insert(p.offset);
                *e = (*e).min(p.offset);
            }
            set.retain(|p| p.period == 0 || by_class[&(p.period, p.offset % p.period)] == p.offset);
            // absorb a singleton one period below a progression
            let singles: Vec<u64> = set.iter().filter(|p| p.period == 0).map(|p| p.offset).collect();
            let progs: Vec<Progression> = set.iter().filter(|p| p.period > 0).copied().collect();
            for p in progs {
                if p.offset >= p.period && singles.contains(&(p.offset - p.period)) {
                    set.remove(&p);
                    set.remove(&Progression::singleton(p.offset - p.period));
                    set.insert(Progression::new(p.offset - p.period, p.period));
                    break;
                }
            }
            // full residue systems coarsen: (o, p), (o+d, p), ... → (o, d)
            let progs: Vec<Progression> = set.iter().filter(|p| p.period > 1).copied().collect();
            'outer: for p in &progs {
                for d in 1..p.period {
                    if p.period % d != 0 {
                        continue;
                    }
                    let steps = p.period / d;
                    let members: Vec<Progression> =
                        (0..steps).map(|j| Progression::new(p.offset + j * d, p.period)).collect();
                    if members.iter().all(|m| set.iter().any(|s| s.subsumes(m))) {
                        // only collapse when every member is literally present
                        if members.iter().all(|m| set.contains(m)) {
                            for m in &members {
                                set.remove(m);
                            }
                            set.insert(Progression::new(p.offset, d));
                            break 'outer;
                        }
                    }
                }
            }
            // drop subsumed entries
            let all: Vec<Progression> = set.iter().copied().collect();
            for (i, p) in all.iter().enumerate() {
                if all.iter().enumerate().any(|(j, q)| i != j && set.contains(q) && q.subsumes(p) && q != p) {
                    set.remove(p);
                }
            }
            if set == before {
                break;
            }
        }
        let mut v: Vec<Progression> = set.into_iter().collect();
        v.sort_by_key(|p| (p.offset, p.period));
        self.progs = v;
    }
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.progs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

pub fn upset_member(s: &UPSet, n: u64) -> bool {
    s.contains(n)
}

pub fn upset_union(s: &UPSet, t: &UPSet) -> UPSet {
    s.union(t)
}

/// Preperiod and period of the reachable-subset sequence of a DFA, together
/// with the resulting length set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthAnalysis {
    pub preperiod: u64,
    pub period: u64,
    pub lengths: UPSet,
}

/// Iterates `R₀ = {q₀}`, `R_{ℓ+1} = δ(R_ℓ, Σ)` until a subset repeats.
pub fn length_analysis(d: &Dfa) -> LengthAnalysis {
    let n = d.num_states();
    let mut cur = vec![false; n];
    cur[d.initial] = true;
    let mut seen: HashMap<Vec<bool>, u64> = HashMap::new();
    let mut hits: Vec<bool> = Vec::new();
    let mut step: u64 = 0;
    let (pre, period) = loop {
        if let Some(&first) = seen.get(&cur) {
            break (first, step - first);
        }
        seen.insert(cur.clone(), step);
        hits.push(cur.iter().enumerate().any(|(q, &on)| on && d.accepting[q]));
        let mut next = vec![false; n];
        for (q, &on) in cur.iter().enumerate() {
            if on {
                for &t in &d.trans[q] {
                    next[t] = true;
                }
            }
        }
        cur = next;
        step += 1;
    };
    let mut progs = Vec::new();
    for (l, &hit) in hits.iter().enumerate() {
        if !hit {
            continue;
        }
        let l = l as u64;
        if l < pre {
            progs.push(Progression::singleton(l));
        } else {
            progs.push(Progression::new(l, period));
        }
    }
    LengthAnalysis { preperiod: pre, period, lengths: UPSet::from_progressions(progs) }
}

/// `{ |w| : w ∈ L(d) }`.
pub fn length_set(d: &Dfa) -> UPSet {
    length_analysis(d).lengths
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let odd = UPSet::from_progressions([Progression::new(1, 2)]);
        assert!(upset_member(&odd, 5));
        assert!(!upset_member(&odd, 4));
        assert!(!upset_member(&UPSet::empty(), 0));
    }

    #[test]
    fn union_against_brute_force() {
        let a = UPSet::singleton(0);
        let b = UPSet::from_progressions([Progression::new(2, 2)]);
        let u = upset_union(&a, &b);
        for n in 0..=20 {
            assert_eq!(u.contains(n), n == 0 || (n >= 2 && n % 2 == 0), "{n}");
        }
        // 0 and 2+2k fold into the even numbers
        assert_eq!(u, UPSet::from_progressions([Progression::new(0, 2)]));
    }

    #[test]
    fn normalization_merges() {
        let s = UPSet::from_progressions([
            Progression::new(3, 2),
            Progression::new(1, 2),
            Progression::singleton(5),
        ]);
        assert_eq!(s.progressions(), &[Progression::new(1, 2)]);
        let t = UPSet::from_progressions([Progression::new(0, 2), Progression::new(1, 2)]);
        assert_eq!(t, UPSet::naturals());
        let u = UPSet::from_progressions([Progression::singleton(1), Progression::new(2, 1)]);
        assert_eq!(u.progressions(), &[Progression::new(1, 1)]);
    }
}
