//! Text format for problems, models and two-counter machines.
//!
//! Problems are S-expressions in the style of SMT-LIB:
//!
//! ```text
//! (set-alphabet "ab")
//! (declare-const X String)
//! (declare-const n Int)
//! (assert (= (str.++ X "a") (str.++ "a" X)))
//! (assert (<= (+ (str.len X) (* -1 n)) 0))
//! (check-sat)
//! (get-model)
//! ```
//!
//! String literals are ASCII with `""` standing for one quote. `re.none` is
//! the empty language. N-ary operators accept any number of arguments, so
//! every syntax tree prints to text that parses back to the same tree.
//! `str.in_re` and `str.to_re` are read as `str.in.re` and `str.to.re`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{Alphabet, Assignment, Atom, Formula, LenTerm, Regex, StrTerm};
use crate::twocounter::{InSym, MachineError, Move, RuleAction, RuleKey, Tape, Top, TwoCounterMachine};

const MAX_DEPTH: usize = 500;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: sort error: {msg}")]
    Sort { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: undeclared variable {name}")]
    UndeclaredVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: letter {letter:?} is not in the alphabet")]
    LetterOutsideAlphabet { line: usize, col: usize, letter: char },
    #[error("{line}:{col}: {source}")]
    Machine { line: usize, col: usize, source: MachineError },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    String,
    Int,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CheckSat,
    GetModel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub alphabet: Alphabet,
    pub decls: Vec<(String, Sort)>,
    pub assertions: Vec<Formula>,
    pub commands: Vec<Command>,
}

impl Problem {
    /// Conjunction of all assertions.
    pub fn formula(&self) -> Formula {
        Formula::And(self.assertions.clone())
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.decls.iter().find(|(n, _)| n == name).map(|(_, s)| *s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Str(String),
    Int(i64),
    Sym(String),
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(Tok, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(items, _) => match items.first() {
                Some(Sexp::Atom(Tok::Sym(s), _)) => Some(s),
                _ => None,
            },
            _ => None,
        }
    }
}

fn syntax(p: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line: p.line, col: p.col, msg: msg.into() }
}

fn sort_err(p: Pos, msg: impl Into<String>) -> ParseError {
    ParseError::Sort { line: p.line, col: p.col, msg: msg.into() }
}

fn is_symbol_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || b"~!@$%^&*_-+=<>.?/".contains(&c)
}

fn tokenize(text: &[u8]) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, c: u8| {
        *i += 1;
        if c == b'\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < text.len() {
        let c = text[i];
        let here = Pos { line, col };
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => advance(&mut i, &mut line, &mut col, c),
            b';' => {
                while i < text.len() && text[i] != b'\n' {
                    let d = text[i];
                    advance(&mut i, &mut line, &mut col, d);
                }
            }
            b'(' => {
                out.push((Tok::Open, here));
                advance(&mut i, &mut line, &mut col, c);
            }
            b')' => {
                out.push((Tok::Close, here));
                advance(&mut i, &mut line, &mut col, c);
            }
            b'"' => {
                advance(&mut i, &mut line, &mut col, c);
                let mut s = String::new();
                loop {
                    let Some(&d) = text.get(i) else { return Err(syntax(here, "unterminated string")) };
                    if d == b'"' {
                        if text.get(i + 1) == Some(&b'"') {
                            s.push('"');
                            advance(&mut i, &mut line, &mut col, d);
                            advance(&mut i, &mut line, &mut col, d);
                            continue;
                        }
                        advance(&mut i, &mut line, &mut col, d);
                        break;
                    }
                    if !(d.is_ascii_graphic() || d == b' ') {
                        return Err(syntax(Pos { line, col }, format!("byte 0x{d:02x} in string literal")));
                    }
                    s.push(d as char);
                    advance(&mut i, &mut line, &mut col, d);
                }
                out.push((Tok::Str(s), here));
            }
            _ if is_symbol_char(c) => {
                let start = i;
                while i < text.len() && is_symbol_char(text[i]) {
                    let d = text[i];
                    advance(&mut i, &mut line, &mut col, d);
                }
                let word = std::str::from_utf8(&text[start..i]).expect("ascii");
                let numeric = word.strip_prefix('-').unwrap_or(word);
                if !numeric.is_empty() && numeric.bytes().all(|b| b.is_ascii_digit()) {
                    let n: i64 = word.parse().map_err(|_| syntax(here, format!("integer {word} out of range")))?;
                    out.push((Tok::Int(n), here));
                } else {
                    out.push((Tok::Sym(word.to_string()), here));
                }
            }
            _ => return Err(syntax(here, format!("unexpected byte 0x{c:02x}"))),
        }
    }
    Ok(out)
}

fn read_sexps(text: &[u8]) -> Result<Vec<Sexp>, ParseError> {
    let toks = tokenize(text)?;
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    for (t, p) in toks {
        match t {
            Tok::Open => {
                if stack.len() >= MAX_DEPTH {
                    return Err(syntax(p, "nesting too deep"));
                }
                stack.push((Vec::new(), p));
            }
            Tok::Close => {
                let (items, start) = stack.pop().ok_or_else(|| syntax(p, "unbalanced ')'"))?;
                let e = Sexp::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
            t => {
                let e = Sexp::Atom(t, p);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(e),
                    None => top.push(e),
                }
            }
        }
    }
    if let Some((_, p)) = stack.last() {
        return Err(syntax(*p, "unbalanced '('"));
    }
    Ok(top)
}

fn items(e: &Sexp) -> &[Sexp] {
    match e {
        Sexp::List(xs, _) => xs,
        Sexp::Atom(..) => &[],
    }
}

fn expect_arity(e: &Sexp, n: usize) -> Result<&[Sexp], ParseError> {
    let xs = items(e);
    if xs.len() != n + 1 {
        return Err(syntax(e.pos(), format!("{} expects {n} argument(s)", e.head().unwrap_or("form"))));
    }
    Ok(&xs[1..])
}

fn symbol(e: &Sexp) -> Result<&str, ParseError> {
    match e {
        Sexp::Atom(Tok::Sym(s), _) => Ok(s),
        _ => Err(syntax(e.pos(), "expected a symbol")),
    }
}

fn string_lit(e: &Sexp) -> Result<&str, ParseError> {
    match e {
        Sexp::Atom(Tok::Str(s), _) => Ok(s),
        _ => Err(syntax(e.pos(), "expected a string literal")),
    }
}

fn int_lit(e: &Sexp) -> Result<i64, ParseError> {
    match e {
        Sexp::Atom(Tok::Int(n), _) => Ok(*n),
        Sexp::List(xs, p) if e.head() == Some("-") && xs.len() == 2 => match &xs[1] {
            Sexp::Atom(Tok::Int(n), _) => n.checked_neg().ok_or_else(|| syntax(*p, "integer out of range")),
            _ => Err(syntax(*p, "expected an integer literal")),
        },
        _ => Err(syntax(e.pos(), "expected an integer literal")),
    }
}

struct Scope {
    alphabet: Option<Alphabet>,
    sorts: BTreeMap<String, Sort>,
}

impl Scope {
    fn alphabet(&self) -> Alphabet {
        self.alphabet.clone().unwrap_or_default()
    }

    fn word(&self, e: &Sexp) -> Result<String, ParseError> {
        let w = string_lit(e)?;
        let sigma = self.alphabet();
        if let Some(c) = w.chars().find(|&c| !sigma.contains(c)) {
            let p = e.pos();
            return Err(ParseError::LetterOutsideAlphabet { line: p.line, col: p.col, letter: c });
        }
        Ok(w.to_string())
    }

    fn var(&self, e: &Sexp, want: Sort) -> Result<String, ParseError> {
        let name = symbol(e)?;
        let p = e.pos();
        match self.sorts.get(name) {
            None => Err(ParseError::UndeclaredVariable { line: p.line, col: p.col, name: name.to_string() }),
            Some(s) if *s != want => Err(sort_err(p, format!("{name} has sort {s:?}, expected {want:?}"))),
            Some(_) => Ok(name.to_string()),
        }
    }

    fn str_term(&self, e: &Sexp) -> Result<StrTerm, ParseError> {
        match e {
            Sexp::Atom(Tok::Str(_), _) => Ok(StrTerm::Lit(self.word(e)?)),
            Sexp::Atom(Tok::Sym(_), _) => Ok(StrTerm::Var(self.var(e, Sort::String)?)),
            Sexp::Atom(Tok::Int(_), p) => Err(sort_err(*p, "integer where a string is expected")),
            Sexp::Atom(_, p) => Err(syntax(*p, "expected a string term")),
            Sexp::List(xs, p) => match e.head() {
                Some("str.++") => Ok(StrTerm::Concat(xs[1..].iter().map(|x| self.str_term(x)).collect::<Result<_, _>>()?)),
                Some("str.len" | "+" | "*" | "-") => Err(sort_err(*p, "integer where a string is expected")),
                _ => Err(syntax(*p, "expected a string term")),
            },
        }
    }

    fn len_term(&self, e: &Sexp) -> Result<LenTerm, ParseError> {
        match e {
            Sexp::Atom(Tok::Int(n), _) => Ok(LenTerm::IntConst(*n)),
            Sexp::Atom(Tok::Sym(_), _) => Ok(LenTerm::IntVar(self.var(e, Sort::Int)?)),
            Sexp::Atom(Tok::Str(_), p) => Err(sort_err(*p, "string where an integer is expected")),
            Sexp::Atom(_, p) => Err(syntax(*p, "expected an integer term")),
            Sexp::List(xs, p) => match e.head() {
                Some("str.len") => Ok(LenTerm::Len(self.str_term(&expect_arity(e, 1)?[0])?)),
                Some("+") => Ok(LenTerm::Sum(xs[1..].iter().map(|x| self.sum_entry(x)).collect::<Result<_, _>>()?)),
                Some("*") => Ok(LenTerm::Sum(vec![self.sum_entry(e)?])),
                Some("-") => Ok(LenTerm::IntConst(int_lit(e)?)),
                Some("str.++") => Err(sort_err(*p, "string where an integer is expected")),
                _ => Err(syntax(*p, "expected an integer term")),
            },
        }
    }

    fn sum_entry(&self, e: &Sexp) -> Result<(i64, LenTerm), ParseError> {
        if e.head() == Some("*") {
            let args = expect_arity(e, 2)?;
            Ok((int_lit(&args[0])?, self.len_term(&args[1])?))
        } else {
            Ok((1, self.len_term(e)?))
        }
    }

    fn regex(&self, e: &Sexp) -> Result<Regex, ParseError> {
        match e {
            Sexp::Atom(Tok::Sym(s), p) => match s.as_str() {
                "re.epsilon" => Ok(Regex::Epsilon),
                "re.none" => Ok(Regex::none()),
                _ => Err(syntax(*p, format!("unknown regex {s}"))),
            },
            Sexp::Atom(_, p) => Err(syntax(*p, "expected a regex")),
            Sexp::List(xs, p) => match e.head() {
                Some("str.to.re" | "str.to_re") => Ok(Regex::Lit(self.word(&expect_arity(e, 1)?[0])?)),
                Some("re.++") => Ok(Regex::Concat(self.regexes(&xs[1..])?)),
                Some("re.union") => Ok(Regex::Union(self.regexes(&xs[1..])?)),
                Some("re.*") => Ok(Regex::star(self.regex(&expect_arity(e, 1)?[0])?)),
                _ => Err(syntax(*p, "expected a regex")),
            },
        }
    }

    fn regexes(&self, xs: &[Sexp]) -> Result<Vec<Regex>, ParseError> {
        xs.iter().map(|x| self.regex(x)).collect()
    }

    fn formula(&self, e: &Sexp) -> Result<Formula, ParseError> {
        let Sexp::List(xs, p) = e else { return Err(syntax(e.pos(), "expected a formula")) };
        match e.head() {
            Some("=") => {
                let a = expect_arity(e, 2)?;
                Ok(Formula::eq(self.str_term(&a[0])?, self.str_term(&a[1])?))
            }
            Some("<=") => {
                let a = expect_arity(e, 2)?;
                Ok(Formula::leq(self.len_term(&a[0])?, int_lit(&a[1])?))
            }
            Some("str.in.re" | "str.in_re") => {
                let a = expect_arity(e, 2)?;
                Ok(Formula::in_re(self.str_term(&a[0])?, self.regex(&a[1])?))
            }
            Some("and") => Ok(Formula::And(xs[1..].iter().map(|x| self.formula(x)).collect::<Result<_, _>>()?)),
            Some("or") => Ok(Formula::Or(xs[1..].iter().map(|x| self.formula(x)).collect::<Result<_, _>>()?)),
            Some("not") => Ok(Formula::not(self.formula(&expect_arity(e, 1)?[0])?)),
            _ => Err(syntax(*p, "expected a formula")),
        }
    }
}

pub fn parse_problem(text: &[u8]) -> Result<Problem, ParseError> {
    let mut scope = Scope { alphabet: None, sorts: BTreeMap::new() };
    let mut decls = Vec::new();
    let mut assertions = Vec::new();
    let mut commands = Vec::new();
    for cmd in read_sexps(text)? {
        let p = cmd.pos();
        match cmd.head() {
            Some("set-alphabet") => {
                if scope.alphabet.is_some() {
                    return Err(syntax(p, "alphabet set twice"));
                }
                if scope.sorts.values().any(|s| *s == Sort::String) {
                    return Err(syntax(p, "set-alphabet must precede string declarations"));
                }
                let letters = string_lit(&expect_arity(&cmd, 1)?[0])?;
                if letters.is_empty() {
                    return Err(syntax(p, "alphabet is empty"));
                }
                scope.alphabet = Some(Alphabet::new(letters.chars()));
            }
            Some("declare-const") => {
                let a = expect_arity(&cmd, 2)?;
                let name = symbol(&a[0])?;
                let sort = match symbol(&a[1])? {
                    "String" => Sort::String,
                    "Int" => Sort::Int,
                    other => return Err(syntax(a[1].pos(), format!("unknown sort {other}"))),
                };
                if sort == Sort::String && scope.alphabet.is_none() {
                    return Err(syntax(p, "set-alphabet must precede string declarations"));
                }
                if scope.sorts.insert(name.to_string(), sort).is_some() {
                    return Err(syntax(a[0].pos(), format!("{name} declared twice")));
                }
                decls.push((name.to_string(), sort));
            }
            Some("assert") => assertions.push(scope.formula(&expect_arity(&cmd, 1)?[0])?),
            Some("check-sat") => {
                expect_arity(&cmd, 0)?;
                commands.push(Command::CheckSat);
            }
            Some("get-model") => {
                expect_arity(&cmd, 0)?;
                commands.push(Command::GetModel);
            }
            _ => return Err(syntax(p, "expected a command")),
        }
    }
    Ok(Problem { alphabet: scope.alphabet(), decls, assertions, commands })
}

fn quote(w: &str) -> String {
    format!("\"{}\"", w.replace('"', "\"\""))
}

fn list(head: &str, args: impl IntoIterator<Item = String>) -> String {
    let mut s = format!("({head}");
    for a in args {
        s.push(' ');
        s.push_str(&a);
    }
    s.push(')');
    s
}

pub fn print_str_term(t: &StrTerm) -> String {
    match t {
        StrTerm::Lit(w) => quote(w),
        StrTerm::Var(v) => v.clone(),
        StrTerm::Concat(ps) => list("str.++", ps.iter().map(print_str_term)),
    }
}

pub fn print_len_term(t: &LenTerm) -> String {
    match t {
        LenTerm::IntConst(n) => n.to_string(),
        LenTerm::IntVar(v) => v.clone(),
        LenTerm::Len(s) => list("str.len", [print_str_term(s)]),
        LenTerm::Sum(ts) => list(
            "+",
            ts.iter().map(|(c, t)| match t {
                LenTerm::Sum(_) => list("*", [c.to_string(), print_len_term(t)]),
                _ if *c == 1 => print_len_term(t),
                _ => list("*", [c.to_string(), print_len_term(t)]),
            }),
        ),
    }
}

pub fn print_regex(r: &Regex) -> String {
    match r {
        Regex::Lit(w) => list("str.to.re", [quote(w)]),
        Regex::Epsilon => "re.epsilon".into(),
        Regex::Union(rs) if rs.is_empty() => "re.none".into(),
        Regex::Union(rs) => list("re.union", rs.iter().map(print_regex)),
        Regex::Concat(rs) => list("re.++", rs.iter().map(print_regex)),
        Regex::Star(r) => list("re.*", [print_regex(r)]),
    }
}

pub fn print_formula(f: &Formula) -> String {
    match f {
        Formula::Atom(Atom::WordEq(l, r)) => list("=", [print_str_term(l), print_str_term(r)]),
        Formula::Atom(Atom::LenLeq(t, c)) => list("<=", [print_len_term(t), c.to_string()]),
        Formula::Atom(Atom::InRe(t, r)) => list("str.in.re", [print_str_term(t), print_regex(r)]),
        Formula::And(fs) => list("and", fs.iter().map(print_formula)),
        Formula::Or(fs) => list("or", fs.iter().map(print_formula)),
        Formula::Not(g) => list("not", [print_formula(g)]),
    }
}

pub fn print_problem(p: &Problem) -> String {
    let mut out = format!("(set-alphabet {})\n", quote(&p.alphabet.to_string()));
    for (name, sort) in &p.decls {
        let s = match sort {
            Sort::String => "String",
            Sort::Int => "Int",
        };
        out.push_str(&format!("(declare-const {name} {s})\n"));
    }
    for a in &p.assertions {
        out.push_str(&format!("(assert {})\n", print_formula(a)));
    }
    for c in &p.commands {
        out.push_str(match c {
            Command::CheckSat => "(check-sat)\n",
            Command::GetModel => "(get-model)\n",
        });
    }
    out
}

/// One `define-fun` line per variable, strings first.
pub fn print_model(a: &Assignment) -> String {
    let mut out = String::new();
    for (v, w) in &a.strs {
        out.push_str(&format!("(define-fun {v} () String {})\n", quote(w)));
    }
    for (v, n) in &a.ints {
        out.push_str(&format!("(define-fun {v} () Int {n})\n"));
    }
    out
}

pub fn parse_model(text: &[u8]) -> Result<Assignment, ParseError> {
    let mut a = Assignment::new();
    for e in read_sexps(text)? {
        if e.head() != Some("define-fun") {
            return Err(syntax(e.pos(), "expected define-fun"));
        }
        let args = expect_arity(&e, 4)?;
        let name = symbol(&args[0])?;
        if !items(&args[1]).is_empty() || matches!(args[1], Sexp::Atom(..)) {
            return Err(syntax(args[1].pos(), "expected ()"));
        }
        match symbol(&args[2])? {
            "String" => a.set_str(name, string_lit(&args[3])?.to_string()),
            "Int" => {
                let n = int_lit(&args[3])?;
                let n = u64::try_from(n).map_err(|_| syntax(args[3].pos(), "negative integer value"))?;
                a.set_int(name, n);
            }
            other => return Err(syntax(args[2].pos(), format!("unknown sort {other}"))),
        }
    }
    Ok(a)
}

/// Parses a machine description:
///
/// ```text
/// states: q0 q1 qf
/// input-alphabet: 0 1
/// initial: q0
/// final: qf
/// q0 0 Z Z -> q1 stor1 R
/// ```
///
/// A rule reads `state letter top1 top2 -> state tape move`, where the
/// letter may be `end`, `top1` is `Z` or `b`, `top2` is `Z` or `c`, the tape
/// is `in`, `stor1` or `stor2` and the move is `L` or `R`. `#` starts a
/// comment.
pub fn parse_2cm(text: &str) -> Result<TwoCounterMachine, ParseError> {
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<char>> = None;
    let mut initial: Option<String> = None;
    let mut finals: Vec<String> = Vec::new();
    let mut rules: Vec<(RuleKey, RuleAction, Pos)> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = line.split_whitespace().collect();
        let Some(&first) = words.first() else { continue };
        let p = Pos { line: ln + 1, col: raw.find(first).map_or(1, |c| c + 1) };
        match first.strip_suffix(':').unwrap_or(first) {
            "states" => states = Some(words[1..].iter().map(|s| s.to_string()).collect()),
            "input-alphabet" => {
                let mut letters = Vec::new();
                for w in &words[1..] {
                    let mut cs = w.chars();
                    match (cs.next(), cs.next()) {
                        (Some(c), None) => letters.push(c),
                        _ => return Err(syntax(p, format!("input letter {w} is not a single character"))),
                    }
                }
                alphabet = Some(letters);
            }
            "initial" => {
                if words.len() != 2 {
                    return Err(syntax(p, "initial takes one state"));
                }
                initial = Some(words[1].to_string());
            }
            "final" => finals.extend(words[1..].iter().map(|s| s.to_string())),
            _ => {
                if words.len() != 8 || words[4] != "->" {
                    return Err(syntax(p, "expected `state letter top1 top2 -> state tape move`"));
                }
                let sym = match words[1] {
                    "end" => InSym::End,
                    w => {
                        let mut cs = w.chars();
                        match (cs.next(), cs.next()) {
                            (Some(c), None) => InSym::Letter(c),
                            _ => return Err(syntax(p, format!("bad input letter {w}"))),
                        }
                    }
                };
                let top = |w: &str, mark: &str| match w {
                    "Z" => Ok(Top::Zero),
                    w if w == mark => Ok(Top::Mark),
                    _ => Err(syntax(p, format!("counter top must be Z or {mark}"))),
                };
                let tape = match words[6] {
                    "in" => Tape::In,
                    "stor1" => Tape::Stor1,
                    "stor2" => Tape::Stor2,
                    w => return Err(syntax(p, format!("unknown tape {w}"))),
                };
                let mv = match words[7] {
                    "L" => Move::L,
                    "R" => Move::R,
                    w => return Err(syntax(p, format!("unknown move {w}"))),
                };
                rules.push((
                    (words[0].to_string(), sym, top(words[2], "b")?, top(words[3], "c")?),
                    (words[5].to_string(), tape, mv),
                    p,
                ));
            }
        }
    }
    let start = Pos { line: 1, col: 1 };
    let states = states.ok_or_else(|| syntax(start, "missing states line"))?;
    let alphabet = alphabet.ok_or_else(|| syntax(start, "missing input-alphabet line"))?;
    let initial = initial.ok_or_else(|| syntax(start, "missing initial line"))?;
    let mut seen: BTreeMap<RuleKey, Pos> = BTreeMap::new();
    for (key, _, p) in &rules {
        if seen.insert(key.clone(), *p).is_some() {
            let source = MachineError::NondeterministicDelta(key.0.clone());
            return Err(ParseError::Machine { line: p.line, col: p.col, source });
        }
    }
    TwoCounterMachine::new(states, alphabet, &initial, finals, rules.into_iter().map(|(k, a, _)| (k, a)).collect())
        .map_err(|source| ParseError::Machine { line: 1, col: 1, source })
}

/// Text form of a machine accepted by [`parse_2cm`].
pub fn print_2cm(m: &TwoCounterMachine) -> String {
    let mut out = format!("states: {}\n", m.states.join(" "));
    let letters: Vec<String> = m.input_alphabet.iter().map(|c| c.to_string()).collect();
    out.push_str(&format!("input-alphabet: {}\n", letters.join(" ")));
    out.push_str(&format!("initial: {}\n", m.initial));
    if !m.finals.is_empty() {
        out.push_str(&format!("final: {}\n", m.finals.iter().cloned().collect::<Vec<_>>().join(" ")));
    }
    for ((q, a, t1, t2), (p, tape, mv)) in &m.delta {
        let a = match a {
            InSym::Letter(c) => c.to_string(),
            InSym::End => "end".into(),
        };
        let t1 = if *t1 == Top::Zero { "Z" } else { "b" };
        let t2 = if *t2 == Top::Zero { "Z" } else { "c" };
        let tape = match tape {
            Tape::In => "in",
            Tape::Stor1 => "stor1",
            Tape::Stor2 => "stor2",
        };
        let mv = if *mv == Move::L { "L" } else { "R" };
        out.push_str(&format!("{q} {a} {t1} {t2} -> {p} {tape} {mv}\n"));
    }
    out
}
