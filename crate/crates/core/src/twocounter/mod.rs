//! Two-counter machines, their computation histories, and the reduction from
//! acceptance to the validity of a `∀∃` sentence over word equations.
//!
//! A machine reads its input through a head that stays on the input, and
//! keeps two unary counters whose tops read `Z` when empty. One step looks at
//! the state, the input letter under the head and the two counter tops, then
//! changes state and moves exactly one of the three tapes.

mod check;
mod encode;
pub mod zoo;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

pub use check::{bounded_validity_check, bounded_validity_check_with, CheckError, CheckOutcome};
pub use encode::{
    encode, encode_history, encode_with_negations, positivize, EncodeError, Sentence, SentenceLetters, DEFAULT_ENCODING_CAP,
};

/// Symbol under the input head; `End` is read on empty input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InSym {
    Letter(char),
    End,
}

/// Top of a counter: `Zero` when the counter is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Top {
    Zero,
    Mark,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tape {
    In,
    Stor1,
    Stor2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    L,
    R,
}

pub type RuleKey = (String, InSym, Top, Top);
pub type RuleAction = (String, Tape, Move);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("unknown state {0}")]
    UnknownState(String),
    #[error("letter {0:?} is not in the input alphabet")]
    UnknownLetter(char),
    #[error("two rules for state {0}")]
    NondeterministicDelta(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCounterMachine {
    pub states: Vec<String>,
    pub input_alphabet: Vec<char>,
    pub initial: String,
    pub finals: BTreeSet<String>,
    pub delta: BTreeMap<RuleKey, RuleAction>,
}

impl TwoCounterMachine {
    pub fn new(
        states: Vec<String>,
        input_alphabet: Vec<char>,
        initial: &str,
        finals: impl IntoIterator<Item = String>,
        rules: Vec<(RuleKey, RuleAction)>,
    ) -> Result<Self, MachineError> {
        let known = |q: &str| {
            if states.iter().any(|s| s == q) {
                Ok(())
            } else {
                Err(MachineError::UnknownState(q.to_string()))
            }
        };
        known(initial)?;
        let finals: BTreeSet<String> = finals.into_iter().collect();
        for q in &finals {
            known(q)?;
        }
        let mut delta = BTreeMap::new();
        for (key, action) in rules {
            known(&key.0)?;
            known(&action.0)?;
            if let InSym::Letter(c) = key.1 {
                if !input_alphabet.contains(&c) {
                    return Err(MachineError::UnknownLetter(c));
                }
            }
            let state = key.0.clone();
            if delta.insert(key, action).is_some() {
                return Err(MachineError::NondeterministicDelta(state));
            }
        }
        Ok(TwoCounterMachine { states, input_alphabet, initial: initial.to_string(), finals, delta })
    }

    pub fn state_index(&self, q: &str) -> Option<usize> {
        self.states.iter().position(|s| s == q)
    }

    fn has_rules(&self, q: &str) -> bool {
        self.delta.keys().any(|k| k.0 == q)
    }
}

/// A configuration: state, input, head position and counter values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineId {
    pub state: String,
    pub input: String,
    pub head: usize,
    pub counter1: u64,
    pub counter2: u64,
}

impl MachineId {
    pub fn initial(m: &TwoCounterMachine, w: &str) -> Self {
        MachineId { state: m.initial.clone(), input: w.to_string(), head: 0, counter1: 0, counter2: 0 }
    }

    pub fn symbol(&self) -> InSym {
        self.input.chars().nth(self.head).map_or(InSym::End, InSym::Letter)
    }

    fn tops(&self) -> (Top, Top) {
        let top = |n: u64| if n == 0 { Top::Zero } else { Top::Mark };
        (top(self.counter1), top(self.counter2))
    }

    pub fn is_final(&self, m: &TwoCounterMachine) -> bool {
        m.finals.contains(&self.state) && self.counter1 == 0 && self.counter2 == 0 && self.head == 0
    }
}

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?}, {}, {}, {})", self.state, self.input, self.head, self.counter1, self.counter2)
    }
}

/// Number of head positions: `|w|`, or 1 for the empty input.
pub fn positions(w: &str) -> usize {
    w.chars().count().max(1)
}

/// Applies one transition.
pub fn step(id: &MachineId, action: &RuleAction) -> MachineId {
    let (q, tape, mv) = action;
    let mut next = id.clone();
    next.state = q.clone();
    match (tape, mv) {
        (Tape::In, Move::L) => next.head = id.head.saturating_sub(1),
        (Tape::In, Move::R) => next.head = (id.head + 1).min(positions(&id.input) - 1),
        (Tape::Stor1, Move::R) => next.counter1 += 1,
        (Tape::Stor1, Move::L) => next.counter1 = id.counter1.saturating_sub(1),
        (Tape::Stor2, Move::R) => next.counter2 += 1,
        (Tape::Stor2, Move::L) => next.counter2 = id.counter2.saturating_sub(1),
    }
    next
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimOutcome {
    /// History from the initial to the first final configuration.
    Accepted(Vec<MachineId>),
    /// The run reached a state without rules or repeated a configuration.
    Rejected,
    StillRunning,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("no transition from configuration {0}")]
    MissingTransition(MachineId),
    #[error("input letter {0:?} is not in the input alphabet")]
    UnknownLetter(char),
}

pub fn simulate(m: &TwoCounterMachine, w: &str, max_steps: usize) -> Result<SimOutcome, SimError> {
    if let Some(c) = w.chars().find(|c| !m.input_alphabet.contains(c)) {
        return Err(SimError::UnknownLetter(c));
    }
    let mut id = MachineId::initial(m, w);
    let mut history = vec![id.clone()];
    let mut seen: HashSet<MachineId> = HashSet::from([id.clone()]);
    for _ in 0..max_steps {
        if id.is_final(m) {
            return Ok(SimOutcome::Accepted(history));
        }
        let (t1, t2) = id.tops();
        let key = (id.state.clone(), id.symbol(), t1, t2);
        let Some(action) = m.delta.get(&key) else {
            return if m.has_rules(&id.state) {
                Err(SimError::MissingTransition(id))
            } else {
                Ok(SimOutcome::Rejected)
            };
        };
        id = step(&id, action);
        if !seen.insert(id.clone()) {
            return Ok(SimOutcome::Rejected);
        }
        history.push(id.clone());
    }
    Ok(if id.is_final(m) { SimOutcome::Accepted(history) } else { SimOutcome::StillRunning })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn immediate_accept() {
        let m = zoo::immediate_accept();
        let SimOutcome::Accepted(h) = simulate(&m, "0", 10).unwrap() else { panic!() };
        assert_eq!(h.len(), 2);
        assert_eq!(h[1].state, "qf");
    }

    #[test]
    fn divergence() {
        assert_eq!(simulate(&zoo::diverging(), "0", 50).unwrap(), SimOutcome::StillRunning);
    }

    #[test]
    fn increment_then_decrement() {
        let SimOutcome::Accepted(h) = simulate(&zoo::inc_dec(), "0", 10).unwrap() else { panic!() };
        let counters: Vec<u64> = h.iter().map(|id| id.counter1).collect();
        assert_eq!(counters, vec![0, 1, 0]);
    }

    #[test]
    fn missing_transition() {
        let m = TwoCounterMachine::new(
            vec!["q0".into(), "qf".into()],
            vec!['0', '1'],
            "q0",
            ["qf".to_string()],
            vec![(("q0".into(), InSym::Letter('0'), Top::Zero, Top::Zero), ("qf".into(), Tape::In, Move::L))],
        )
        .unwrap();
        assert!(matches!(simulate(&m, "1", 5), Err(SimError::MissingTransition(_))));
    }

    #[test]
    fn looping_rejects() {
        assert_eq!(simulate(&zoo::looping(), "0", 100).unwrap(), SimOutcome::Rejected);
    }

    #[test]
    fn nondeterminism_is_rejected() {
        let key = ("q0".to_string(), InSym::End, Top::Zero, Top::Zero);
        let err = TwoCounterMachine::new(
            vec!["q0".into()],
            vec![],
            "q0",
            [],
            vec![(key.clone(), ("q0".into(), Tape::In, Move::L)), (key, ("q0".into(), Tape::In, Move::R))],
        );
        assert_eq!(err, Err(MachineError::NondeterministicDelta("q0".into())));
    }
}
