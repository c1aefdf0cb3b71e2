use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use strsat::automata::regex_to_dfa;
use strsat::frontend::{parse_problem, print_formula, print_problem, Problem, Sort};
use strsat::lia::{lia_sat, LiaOutcome};
use strsat::normalize::{dnf_to_formula, to_dnf};
use strsat::random::{random_assignment, random_formula, random_lin_system, random_regex, random_word};
use strsat::semantics::{eval_formula, eval_str, Evaluator};
use strsat::solver::{check_sat, verify_model, Verdict};
use strsat::{Alphabet, Formula, StrTerm};

fn sigma() -> Alphabet {
    Alphabet::default()
}

fn problem_of(phi: &Formula) -> Problem {
    let (strs, ints) = phi.free_vars();
    Problem {
        alphabet: sigma(),
        decls: strs.into_iter().map(|x| (x, Sort::String)).chain(ints.into_iter().map(|n| (n, Sort::Int))).collect(),
        assertions: vec![phi.clone()],
        commands: vec![],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dnf_preserves_truth(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &sigma(), 3, 3, &["n"]);
        let dnf = dnf_to_formula(&to_dnf(&phi));
        for _ in 0..8 {
            let a = random_assignment(&mut rng, &phi, &sigma(), 4, 6);
            prop_assert_eq!(eval_formula(&phi, &a).unwrap(), eval_formula(&dnf, &a).unwrap());
        }
    }

    #[test]
    fn concatenation_evaluates_to_concatenated_values(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = StrTerm::concat(vec![StrTerm::var("X"), StrTerm::lit(&random_word(&mut rng, &sigma(), 0, 3))]);
        let r = StrTerm::concat(vec![StrTerm::var("Y"), StrTerm::var("X")]);
        let phi = Formula::eq(l.clone(), r.clone());
        let a = random_assignment(&mut rng, &phi, &sigma(), 4, 0);
        let both = StrTerm::concat(vec![l.clone(), r.clone()]);
        prop_assert_eq!(eval_str(&both, &a).unwrap(), eval_str(&l, &a).unwrap() + &eval_str(&r, &a).unwrap());
    }

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &sigma(), 3, 3, &["n", "m"]);
        let text = print_problem(&problem_of(&phi));
        let back = parse_problem(text.as_bytes()).unwrap();
        let again = back.formula();
        prop_assert_eq!(print_problem(&back), text);
        for _ in 0..4 {
            let a = random_assignment(&mut rng, &phi, &sigma(), 4, 6);
            prop_assert_eq!(eval_formula(&phi, &a).unwrap(), eval_formula(&again, &a).unwrap(), "{}", print_formula(&phi));
        }
    }

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_problem(&bytes);
    }

    #[test]
    fn parser_never_panics_on_near_syntax(seed in any::<u64>(), cut in 0usize..400, flip in any::<u8>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &sigma(), 3, 3, &["n"]);
        let mut bytes = print_problem(&problem_of(&phi)).into_bytes();
        let i = cut % bytes.len().max(1);
        if i < bytes.len() {
            bytes[i] = flip;
        }
        let _ = parse_problem(&bytes);
        bytes.truncate(i);
        let _ = parse_problem(&bytes);
    }

    #[test]
    fn lia_models_satisfy_their_system(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sys = random_lin_system(&mut rng, 4, 5, 5);
        if let Ok(LiaOutcome::Sat(m)) = lia_sat(&sys) {
            prop_assert!(sys.holds(&m.values));
        }
    }

    #[test]
    fn solver_models_are_models(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = random_formula(&mut rng, &sigma(), 2, 2, &[]);
        if let Ok(Verdict::Sat(a)) = check_sat(&phi, &sigma()) {
            prop_assert!(verify_model(&phi, &a));
        }
    }

    #[test]
    fn evaluator_and_automaton_agree_on_membership(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = random_regex(&mut rng, &sigma(), 3);
        let d = regex_to_dfa(&r, &sigma()).unwrap();
        let mut e = Evaluator::new();
        for _ in 0..16 {
            let w = random_word(&mut rng, &sigma(), 0, 6);
            prop_assert_eq!(e.member(&w, &r), d.accepts(&w), "{:?} on {:?}", r, w);
        }
    }
}

#[test]
fn parser_survives_random_bytes() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let alphabet = b"()\"; -+*0123456789abXYZ assert declare-const String Int str.++ str.len re.* <= =\n";
    for _ in 0..100_000 {
        let n = rng.gen_range(0..64);
        let bytes: Vec<u8> = (0..n)
            .map(|_| if rng.gen_bool(0.8) { alphabet[rng.gen_range(0..alphabet.len())] } else { rng.gen() })
            .collect();
        let _ = parse_problem(&bytes);
    }
}

#[test]
fn deep_nesting_is_an_error() {
    let text = format!("(assert {}(= X X){})", "(not ".repeat(10_000), ")".repeat(10_000));
    assert!(parse_problem(text.as_bytes()).is_err());
}
