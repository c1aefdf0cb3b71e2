"""Smoke test for the pystrsat extension module.

Build and install first:  maturin develop --release -m crates/py/Cargo.toml
"""

import os
import tempfile

import pystrsat

EXAMPLE = """
(set-alphabet "ab")
(declare-const X String)
(assert (= (str.++ "ab" X) (str.++ X "ba")))
(assert (str.in.re X (re.++ (re.union (str.to.re "ab") (str.to.re "ba")) (re.* (str.to.re "ab")) (str.to.re "a"))))
(assert (<= (str.len X) 5))
"""

MACHINE = """
states: q0 q1 q2
input-alphabet: 0 1
initial: q0
final: q2
q0 0 Z Z -> q1 stor1 R
q1 0 b Z -> q2 stor1 L
"""


def main():
    p = pystrsat.Problem(EXAMPLE)
    assert p.alphabet == "ab"
    assert p.variables == ["X"]
    v = p.solve()
    assert v.is_sat(), v
    assert v.strings["X"] in ("aba", "ababa"), v
    assert p.oracle(5, 0).is_sat()

    v = pystrsat.solve(EXAMPLE.replace("(<= (str.len X) 5)", "(<= (str.len X) 2)"))
    assert v.kind == "unsat", v

    v = pystrsat.solve('(set-alphabet "ab")(declare-const X String)(declare-const Y String)'
                       '(assert (= (str.++ X "ab" Y) (str.++ Y "ba" X)))')
    assert v.kind == "unsupported" and v.reason == "no solved form in fragment", v

    try:
        pystrsat.Problem("(assert")
    except ValueError as e:
        assert "1:1" in str(e), e
    else:
        raise AssertionError("parse error not raised")

    assert pystrsat.simulate_2cm(MACHINE, "0") == "accepted"
    assert pystrsat.counterexample_2cm(MACHINE, "0", 4) is not None
    assert pystrsat.encode_2cm(MACHINE, "0").startswith("(set-alphabet")

    with tempfile.TemporaryDirectory() as d:
        with open(os.path.join(d, "a.smt2"), "w") as f:
            f.write('(set-alphabet "ab")(declare-const X String)(declare-const Y String)'
                    '(assert (= X (str.++ "ab" Y)))(assert (= (str.++ "ab" Y) (str.++ Y "ba")))')
        files, total, solved, ratio = pystrsat.analyze([d])
        assert (files, total, solved) == (1, 2, 1) and ratio == 0.5

    print("smoke test passed")


if __name__ == "__main__":
    main()
