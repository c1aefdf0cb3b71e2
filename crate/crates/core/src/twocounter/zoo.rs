//! Small machines over the input alphabet `{0, 1}` with known behaviour.

use super::{InSym, Move, RuleAction, RuleKey, Tape, Top, TwoCounterMachine};

const INPUTS: [InSym; 3] = [InSym::Letter('0'), InSym::Letter('1'), InSym::End];

fn machine(states: &[&str], finals: &[&str], rules: &[(&str, Top, Top, &str, Tape, Move)]) -> TwoCounterMachine {
    let mut all: Vec<(RuleKey, RuleAction)> = Vec::new();
    for &(q, t1, t2, p, tape, mv) in rules {
        for a in INPUTS {
            all.push(((q.to_string(), a, t1, t2), (p.to_string(), tape, mv)));
        }
    }
    TwoCounterMachine::new(
        states.iter().map(|s| s.to_string()).collect(),
        vec!['0', '1'],
        states[0],
        finals.iter().map(|s| s.to_string()),
        all,
    )
    .expect("zoo machine is well formed")
}

/// Moves to the final state without changing anything else.
pub fn immediate_accept() -> TwoCounterMachine {
    machine(&["q0", "qf"], &["qf"], &[("q0", Top::Zero, Top::Zero, "qf", Tape::In, Move::L)])
}

/// Pushes one mark on the first counter, pops it, accepts.
pub fn inc_dec() -> TwoCounterMachine {
    machine(
        &["q0", "q1", "q2"],
        &["q2"],
        &[
            ("q0", Top::Zero, Top::Zero, "q1", Tape::Stor1, Move::R),
            ("q1", Top::Mark, Top::Zero, "q2", Tape::Stor1, Move::L),
        ],
    )
}

/// Moves the head right, back left, accepts.
pub fn right_left() -> TwoCounterMachine {
    machine(
        &["q0", "q1", "q2"],
        &["q2"],
        &[
            ("q0", Top::Zero, Top::Zero, "q1", Tape::In, Move::R),
            ("q1", Top::Zero, Top::Zero, "q2", Tape::In, Move::L),
        ],
    )
}

/// Increments the first counter forever.
pub fn diverging() -> TwoCounterMachine {
    machine(
        &["q0", "qf"],
        &["qf"],
        &[
            ("q0", Top::Zero, Top::Zero, "q0", Tape::Stor1, Move::R),
            ("q0", Top::Mark, Top::Zero, "q0", Tape::Stor1, Move::R),
        ],
    )
}

/// Alternates between two states without moving, revisiting the start.
pub fn looping() -> TwoCounterMachine {
    machine(
        &["q0", "q1", "qf"],
        &["qf"],
        &[
            ("q0", Top::Zero, Top::Zero, "q1", Tape::In, Move::L),
            ("q1", Top::Zero, Top::Zero, "q0", Tape::In, Move::L),
        ],
    )
}

/// All zoo machines with a sample input.
pub fn all() -> Vec<(&'static str, TwoCounterMachine, &'static str)> {
    vec![
        ("immediate-accept", immediate_accept(), "0"),
        ("inc-dec", inc_dec(), "0"),
        ("right-left", right_left(), "01"),
        ("diverging", diverging(), "0"),
        ("looping", looping(), "1"),
    ]
}
