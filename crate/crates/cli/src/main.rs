use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use strsat::bench::{analyze_corpus, collect_files, generate_corpus, render_table, render_tsv};
use strsat::frontend::{parse_2cm, parse_problem, print_model, Command, Problem, Sort};
use strsat::oracle::{brute_force_sat, BoundedVerdict};
use strsat::solver::{check_sat, Verdict};
use strsat::twocounter::{
    bounded_validity_check, encode, encode_history, simulate, CheckOutcome, SentenceLetters, SimOutcome,
};
use strsat::Assignment;

const SAT: u8 = 0;
const UNSAT: u8 = 1;
const UNSUPPORTED: u8 = 2;
const ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "strsat", version, about = "Word equations with length and regex constraints")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide a problem file.
    Solve { file: PathBuf },
    /// Search for a model by enumeration.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(long, default_value_t = 10)]
        max_int: u64,
    },
    /// Count solved-form equations in problem files.
    Analyze {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Print one tab-separated line per file instead of the table.
        #[arg(long)]
        tsv: bool,
    },
    /// Print the sentence encoding a two-counter machine on an input.
    #[command(name = "encode-2cm")]
    Encode2cm {
        machine: PathBuf,
        #[arg(long)]
        input: String,
        /// Also search for a counterexample up to this length.
        #[arg(long)]
        check_bound: Option<usize>,
    },
    /// Write a synthetic corpus of problem files.
    #[command(name = "gen-corpus")]
    GenCorpus {
        dir: PathBuf,
        #[arg(long, default_value_t = 1000)]
        files: usize,
        #[arg(long, default_value_t = 0.8)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn fail(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    ERROR
}

fn load(file: &PathBuf) -> Result<Problem, u8> {
    let bytes = fs::read(file).map_err(|e| fail(format!("{}: {e}", file.display())))?;
    parse_problem(&bytes).map_err(|e| fail(format!("{}:{e}", file.display())))
}

/// Adds defaults for declared variables the formula never mentions.
fn complete(p: &Problem, mut a: Assignment) -> Assignment {
    for (name, sort) in &p.decls {
        match sort {
            Sort::String if !a.strs.contains_key(name) => a.set_str(name, String::new()),
            Sort::Int if !a.ints.contains_key(name) => a.set_int(name, 0),
            _ => {}
        }
    }
    a
}

fn solve(file: &PathBuf) -> u8 {
    let p = match load(file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match check_sat(&p.formula(), &p.alphabet) {
        Ok(Verdict::Sat(a)) => {
            println!("sat");
            if p.commands.contains(&Command::GetModel) {
                print!("{}", print_model(&complete(&p, a)));
            }
            SAT
        }
        Ok(Verdict::Unsat) => {
            println!("unsat");
            UNSAT
        }
        Ok(Verdict::Unsupported(r)) => {
            println!("unsupported: {r}");
            UNSUPPORTED
        }
        Err(e) => fail(e),
    }
}

fn oracle(file: &PathBuf, max_len: usize, max_int: u64) -> u8 {
    let p = match load(file) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match brute_force_sat(&p.formula(), &p.alphabet, max_len, max_int) {
        Ok(BoundedVerdict::SatWith(a)) => {
            println!("sat");
            print!("{}", print_model(&complete(&p, a)));
            SAT
        }
        Ok(BoundedVerdict::NoModelUpTo(n)) => {
            println!("no model up to length {n}");
            UNSAT
        }
        Err(e) => fail(e),
    }
}

fn analyze(paths: &[PathBuf], tsv: bool) -> u8 {
    if let Some(p) = paths.iter().find(|p| !p.exists()) {
        return fail(format!("{}: no such file or directory", p.display()));
    }
    let stats = analyze_corpus(&collect_files(paths));
    for (p, e) in stats.unparseable.iter().chain(&stats.io_errors) {
        eprintln!("skipped {}: {e}", p.display());
    }
    print!("{}", if tsv { render_tsv(&stats) } else { render_table(&stats) });
    SAT
}

fn encode_2cm(machine: &PathBuf, input: &str, bound: Option<usize>) -> u8 {
    let text = match fs::read_to_string(machine) {
        Ok(t) => t,
        Err(e) => return fail(format!("{}: {e}", machine.display())),
    };
    let m = match parse_2cm(&text) {
        Ok(m) => m,
        Err(e) => return fail(format!("{}:{e}", machine.display())),
    };
    let sentence = match encode(&m, input) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    println!("{sentence}");
    let Some(n) = bound else { return SAT };
    match bounded_validity_check(&sentence, n) {
        Ok(CheckOutcome::Counterexample(ws)) => {
            println!("; counterexample {:?}", ws[0]);
            if let (Ok(SimOutcome::Accepted(h)), Ok(letters)) = (simulate(&m, input, n), SentenceLetters::new(&m, input)) {
                if encode_history(&letters, &h) == ws[0] {
                    println!("; the machine accepts; the counterexample is its history");
                }
            }
        }
        Ok(CheckOutcome::NoCounterexampleUpTo(n)) => println!("; no counterexample up to length {n}"),
        Err(e) => return fail(e),
    }
    SAT
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ERROR } else { SAT };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Solve { file } => solve(&file),
        Cmd::Oracle { file, max_len, max_int } => oracle(&file, max_len, max_int),
        Cmd::Analyze { paths, tsv } => analyze(&paths, tsv),
        Cmd::Encode2cm { machine, input, check_bound } => encode_2cm(&machine, &input, check_bound),
        Cmd::GenCorpus { dir, files, fraction, seed } => {
            if !(0.0..=1.0).contains(&fraction) {
                fail("--fraction must lie in [0, 1]")
            } else {
                match generate_corpus(&dir, files, fraction, seed) {
                    Ok((total, solved)) => {
                        println!("wrote {files} files, {total} equations, {solved} solved");
                        SAT
                    }
                    Err(e) => fail(format!("{}: {e}", dir.display())),
                }
            }
        }
    };
    ExitCode::from(code)
}
