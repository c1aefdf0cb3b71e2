use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn strsat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strsat")).args(args).output().unwrap()
}

fn first_line(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).lines().next().unwrap_or_default().to_string()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const COMMUTING: &str = r#"(set-alphabet "ab")
(declare-const X String)
(assert (= (str.++ "ab" X) (str.++ X "ba")))
(assert (str.in_re X (re.++ (re.union (str.to_re "ab") (str.to_re "ba")) (re.* (str.to_re "ab")) (str.to_re "a"))))
(assert (<= (str.len X) 5))
(check-sat)
(get-model)
"#;

#[test]
fn solve_sat_prints_model() {
    let d = TempDir::new().unwrap();
    let o = strsat(&["solve", &write(&d, "p.smt2", COMMUTING)]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert_eq!(first_line(&o), "sat");
    assert!(out.contains("(define-fun X () String \"aba\")") || out.contains("(define-fun X () String \"ababa\")"), "{out}");
}

#[test]
fn solve_unsat() {
    let d = TempDir::new().unwrap();
    let text = COMMUTING.replace("(<= (str.len X) 5)", "(<= (str.len X) 2)");
    let o = strsat(&["solve", &write(&d, "p.smt2", &text)]);
    assert_eq!((o.status.code(), first_line(&o)), (Some(1), "unsat".to_string()));
}

#[test]
fn solve_outside_fragment() {
    let d = TempDir::new().unwrap();
    let text = r#"(set-alphabet "ab")(declare-const X String)(declare-const Y String)
(assert (= (str.++ X "ab" Y) (str.++ Y "ba" X)))(check-sat)"#;
    let o = strsat(&["solve", &write(&d, "p.smt2", text)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(first_line(&o), "unsupported: no solved form in fragment");
}

#[test]
fn parse_errors_report_position() {
    let d = TempDir::new().unwrap();
    let o = strsat(&["solve", &write(&d, "p.smt2", "(assert (= X \"a\"))")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p.smt2:1:"));
}

#[test]
fn missing_file_and_bad_usage() {
    assert_eq!(strsat(&["solve", "/nonexistent/p.smt2"]).status.code(), Some(3));
    assert_eq!(strsat(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(strsat(&["--help"]).status.code(), Some(0));
}

#[test]
fn oracle_bounds() {
    let d = TempDir::new().unwrap();
    let f = write(&d, "p.smt2", COMMUTING);
    let o = strsat(&["oracle", &f, "--max-len", "3"]);
    assert_eq!((o.status.code(), first_line(&o)), (Some(0), "sat".to_string()));
    let o = strsat(&["oracle", &f, "--max-len", "2"]);
    assert_eq!((o.status.code(), first_line(&o)), (Some(1), "no model up to length 2".to_string()));
}

#[test]
fn corpus_round_trip() {
    let d = TempDir::new().unwrap();
    let dir = d.path().join("corpus");
    let dir = dir.to_str().unwrap();
    let o = strsat(&["gen-corpus", dir, "--files", "50", "--seed", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let line = first_line(&o);
    let nums: Vec<usize> = line.split_whitespace().filter_map(|w| w.trim_end_matches(',').parse().ok()).collect();
    assert_eq!(nums.len(), 3, "{line}");

    let o = strsat(&["analyze", dir, "--tsv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<String>> =
        String::from_utf8_lossy(&o.stdout).lines().map(|l| l.split('\t').map(String::from).collect()).collect();
    assert_eq!(rows.len(), 50);
    let total: usize = rows.iter().map(|r| r[1].parse::<usize>().unwrap()).sum();
    let solved: usize = rows.iter().map(|r| r[2].parse::<usize>().unwrap()).sum();
    assert_eq!((total, solved), (nums[1], nums[2]));
    assert!(Path::new(&rows[0][0]).ends_with("case-0000.smt2"));

    let o = strsat(&["analyze", dir]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("files 50  unparseable 0  io errors 0"));
    assert_eq!(strsat(&["gen-corpus", dir, "--fraction", "1.5"]).status.code(), Some(3));
}

const INC_DEC: &str = "states: q0 q1 qf
input-alphabet: 0 1
initial: q0
final: qf
q0 0 Z Z -> q1 stor1 R
q1 0 b Z -> qf stor1 L
";

#[test]
fn encode_machine() {
    let d = TempDir::new().unwrap();
    let m = write(&d, "m.2cm", INC_DEC);
    let o = strsat(&["encode-2cm", &m, "--input", "0", "--check-bound", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.starts_with("(set-alphabet"), "{out}");
    assert!(out.contains("(forall ((S String))"));
    assert!(out.contains("; counterexample"), "{out}");
    assert!(out.contains("the counterexample is its history"), "{out}");

    let o = strsat(&["encode-2cm", &m, "--input", "2"]);
    assert_eq!(o.status.code(), Some(3));
}
