//! Counting word equations that are already in solved form across a corpus
//! of problem files.
//!
//! An equation `l = r` counts as solved when `l` is a bare variable that does
//! not occur in `r`.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use walkdir::WalkDir;

use crate::frontend::{parse_problem, print_problem, Command, Problem, Sort};
use crate::syntax::{Alphabet, Atom, Formula, LenTerm, Regex, StrTerm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileStats {
    pub path: PathBuf,
    pub total: usize,
    pub solved: usize,
}

impl FileStats {
    pub fn ratio(&self) -> f64 {
        ratio(self.solved, self.total)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorpusStats {
    pub files: usize,
    pub equations_total: usize,
    pub equations_solved_form: usize,
    /// Sorted by path.
    pub per_file: Vec<FileStats>,
    pub unparseable: Vec<(PathBuf, String)>,
    pub io_errors: Vec<(PathBuf, String)>,
}

impl CorpusStats {
    pub fn ratio(&self) -> f64 {
        ratio(self.equations_solved_form, self.equations_total)
    }
}

fn ratio(solved: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        solved as f64 / total as f64
    }
}

pub fn is_solved_equation(lhs: &StrTerm, rhs: &StrTerm) -> bool {
    let StrTerm::Var(x) = lhs else { return false };
    let mut vars = Default::default();
    rhs.collect_vars(&mut vars);
    !vars.contains(x)
}

/// `(total, solved)` word equations in a problem.
pub fn count_equations(p: &Problem) -> (usize, usize) {
    let mut total = 0;
    let mut solved = 0;
    for f in &p.assertions {
        for a in f.atoms() {
            if let Atom::WordEq(l, r) = a {
                total += 1;
                solved += usize::from(is_solved_equation(l, r));
            }
        }
    }
    (total, solved)
}

enum Outcome {
    Ok(FileStats),
    Unparseable(PathBuf, String),
    Io(PathBuf, String),
}

fn analyze_file(path: &Path) -> Outcome {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) => return Outcome::Io(path.to_path_buf(), e.to_string()),
    };
    match parse_problem(&bytes) {
        Ok(p) => {
            let (total, solved) = count_equations(&p);
            Outcome::Ok(FileStats { path: path.to_path_buf(), total, solved })
        }
        Err(e) => Outcome::Unparseable(path.to_path_buf(), e.to_string()),
    }
}

pub fn analyze_corpus(paths: &[PathBuf]) -> CorpusStats {
    let outcomes: Vec<Outcome> = paths.par_iter().map(|p| analyze_file(p)).collect();
    let mut stats = CorpusStats::default();
    for o in outcomes {
        match o {
            Outcome::Ok(f) => {
                stats.files += 1;
                stats.equations_total += f.total;
                stats.equations_solved_form += f.solved;
                stats.per_file.push(f);
            }
            Outcome::Unparseable(p, e) => stats.unparseable.push((p, e)),
            Outcome::Io(p, e) => stats.io_errors.push((p, e)),
        }
    }
    stats.per_file.sort_by(|a, b| a.path.cmp(&b.path));
    stats.unparseable.sort();
    stats.io_errors.sort();
    stats
}

/// Regular files under each root (or the root itself), sorted.
pub fn collect_files(roots: &[PathBuf]) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = roots
        .iter()
        .flat_map(|r| WalkDir::new(r).into_iter().filter_map(Result::ok))
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn render_table(stats: &CorpusStats) -> String {
    let width = stats.per_file.iter().map(|f| f.path.display().to_string().len()).max().unwrap_or(4).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:>8}  {:>8}  {:>7}", "file", "total", "solved", "ratio");
    for f in &stats.per_file {
        let _ = writeln!(out, "{:<width$}  {:>8}  {:>8}  {:>7.4}", f.path.display(), f.total, f.solved, f.ratio());
    }
    let _ = writeln!(
        out,
        "{:<width$}  {:>8}  {:>8}  {:>7.4}",
        "TOTAL",
        stats.equations_total,
        stats.equations_solved_form,
        stats.ratio()
    );
    let _ = writeln!(
        out,
        "files {}  unparseable {}  io errors {}",
        stats.files,
        stats.unparseable.len(),
        stats.io_errors.len()
    );
    out
}

/// One `path\ttotal\tsolved\tratio` line per analyzed file.
pub fn render_tsv(stats: &CorpusStats) -> String {
    let mut out = String::new();
    for f in &stats.per_file {
        let _ = writeln!(out, "{}\t{}\t{}\t{:.4}", f.path.display(), f.total, f.solved, f.ratio());
    }
    out
}

const VARS: usize = 6;

fn var_name(i: usize) -> String {
    format!("X{i}")
}

fn random_rhs(rng: &mut ChaCha8Rng, exclude: Option<usize>) -> StrTerm {
    let n = rng.gen_range(1..=3);
    let mut parts = Vec::new();
    for _ in 0..n {
        if rng.gen_bool(0.5) {
            let len = rng.gen_range(1..=3);
            parts.push(StrTerm::Lit((0..len).map(|_| if rng.gen_bool(0.5) { 'a' } else { 'b' }).collect()));
        } else {
            let choices: Vec<usize> = (0..VARS).filter(|&i| Some(i) != exclude).collect();
            parts.push(StrTerm::Var(var_name(*choices.choose(rng).unwrap())));
        }
    }
    StrTerm::concat(parts)
}

fn unsolved_equation(rng: &mut ChaCha8Rng) -> Formula {
    let x = rng.gen_range(0..VARS);
    match rng.gen_range(0..3) {
        // the defined variable recurs on the right
        0 => {
            let rhs = StrTerm::concat(vec![StrTerm::lit("a"), StrTerm::Var(var_name(x)), random_rhs(rng, None)]);
            Formula::eq(StrTerm::Var(var_name(x)), rhs)
        }
        // a literal leads the left side
        1 => Formula::eq(StrTerm::concat(vec![StrTerm::lit("ab"), StrTerm::Var(var_name(x))]), random_rhs(rng, None)),
        _ => Formula::eq(
            StrTerm::concat(vec![StrTerm::Var(var_name(x)), StrTerm::Var(var_name((x + 1) % VARS))]),
            random_rhs(rng, None),
        ),
    }
}

/// A problem with 1 to 10 word equations, each one solved with probability
/// `solved_fraction`, plus a few length and regex atoms. Returns the number
/// of equations and of solved ones.
pub fn generate_problem(rng: &mut ChaCha8Rng, solved_fraction: f64) -> (Problem, usize, usize) {
    let mut assertions = Vec::new();
    let total = rng.gen_range(1..=10);
    let mut solved = 0;
    for _ in 0..total {
        if rng.gen_bool(solved_fraction) {
            let x = rng.gen_range(0..VARS);
            assertions.push(Formula::eq(StrTerm::Var(var_name(x)), random_rhs(rng, Some(x))));
            solved += 1;
        } else {
            assertions.push(unsolved_equation(rng));
        }
    }
    for _ in 0..rng.gen_range(0..=2) {
        let x = StrTerm::Var(var_name(rng.gen_range(0..VARS)));
        if rng.gen_bool(0.5) {
            assertions.push(Formula::leq(LenTerm::Len(x), rng.gen_range(0..10)));
        } else {
            assertions.push(Formula::in_re(x, Regex::star(Regex::lit("ab"))));
        }
    }
    assertions.shuffle(rng);
    let problem = Problem {
        alphabet: Alphabet::new(['a', 'b']),
        decls: (0..VARS).map(|i| (var_name(i), Sort::String)).collect(),
        assertions,
        commands: vec![Command::CheckSat],
    };
    (problem, total, solved)
}

/// Writes `files` generated problems into `dir` as `case-NNNN.smt2` and
/// returns the equation totals.
pub fn generate_corpus(dir: &Path, files: usize, solved_fraction: f64, seed: u64) -> io::Result<(usize, usize)> {
    fs::create_dir_all(dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut total, mut solved) = (0, 0);
    for i in 0..files {
        let (p, t, s) = generate_problem(&mut rng, solved_fraction);
        total += t;
        solved += s;
        fs::write(dir.join(format!("case-{i:04}.smt2")), print_problem(&p))?;
    }
    Ok((total, solved))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_of_two() {
        let p = parse_problem(
            br#"(set-alphabet "ab")(declare-const X String)(declare-const Y String)(declare-const Z String)
                (assert (= X (str.++ "ab" Y)))
                (assert (= (str.++ "ab" Z) (str.++ Z "ba")))"#,
        )
        .unwrap();
        assert_eq!(count_equations(&p), (2, 1));
    }

    #[test]
    fn recurring_variable_is_not_solved() {
        assert!(!is_solved_equation(&StrTerm::var("X"), &StrTerm::concat(vec![StrTerm::lit("a"), StrTerm::var("X")])));
        assert!(is_solved_equation(&StrTerm::var("X"), &StrTerm::var("Y")));
    }

    #[test]
    fn empty_corpus() {
        let s = analyze_corpus(&[]);
        assert_eq!((s.files, s.equations_total, s.ratio()), (0, 0, 0.0));
    }

    #[test]
    fn generated_counts_match_analysis() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let (p, t, s) = generate_problem(&mut rng, 0.8);
            let back = parse_problem(print_problem(&p).as_bytes()).unwrap();
            assert_eq!(count_equations(&back), (t, s));
        }
    }
}
