#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use ltlguard_core::automata::{BuchiAutomaton, SymbolicLabel, Transition};
use ltlguard_core::ltl::{parse, Formula};
use rand::Rng;

pub const BASE_RULE: &str = "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> G(straight_1km & arrive_destination)";
pub const TASK: &str = "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))";
pub const REVISION_1: &str = "G((location_start) -> F(straight_200m)) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))";
pub const FINAL: &str = "X(destinationLeftOnMapleStreet) & G((location_start) -> (F(straight_200m) | G(!straight_200m))) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))";

pub fn f(text: &str) -> Formula {
    parse(text).unwrap_or_else(|d| panic!("{text}: {d:?}"))
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// Formula pairs over G/F/U/X patterns and the running example.
pub fn pair_suite() -> Vec<(&'static str, &'static str)> {
    vec![
        ("G a", "F a"),
        ("F a", "G a"),
        ("G a", "a"),
        ("a", "G a"),
        ("X a", "F a"),
        ("F a", "X a"),
        ("a U b", "F b"),
        ("F b", "a U b"),
        ("a & b", "a"),
        ("a", "a & b"),
        ("a", "a | b"),
        ("G F a", "F G a"),
        ("F G a", "G F a"),
        ("G(a -> F b)", "G F b"),
        ("G F b", "G(a -> F b)"),
        ("G(a & b)", "G a & G b"),
        ("G a & G b", "G(a & b)"),
        ("F(a | b)", "F a | F b"),
        ("F a | F b", "F(a | b)"),
        ("G(a -> X b)", "G(a -> F b)"),
        ("G(a -> F b)", "G(a -> X b)"),
        ("a U (b & c)", "a U b"),
        ("a U b", "a U (b & c)"),
        ("X X a", "F a"),
        ("!(a U b)", "G !b | (!b U (!a & !b))"),
        ("G !b | (!b U (!a & !b))", "!(a U b)"),
        ("X(a U b)", "X a U X b"),
        ("X a U X b", "X(a U b)"),
        ("G(a <-> X a)", "G a | G !a"),
        ("G a | G !a", "G(a <-> X a)"),
        ("a U b", "a U (a U b)"),
        ("false", "a"),
        ("a", "true"),
        ("true", "F a"),
        ("G(a -> b) & G(b -> c)", "G(a -> c)"),
        ("G(a -> c)", "G(a -> b) & G(b -> c)"),
        ("F(a & X b)", "F a & F b"),
        ("F a & F b", "F(a & X b)"),
        (TASK, BASE_RULE),
        (REVISION_1, BASE_RULE),
        (FINAL, BASE_RULE),
        (BASE_RULE, BASE_RULE),
        ("G(straight_1km & arrive_destination)", BASE_RULE),
        ("F(right_turn & straight_500m & !left_turn)", BASE_RULE),
    ]
}

/// Twelve formulas covering each operator.
pub fn pattern_corpus() -> Vec<&'static str> {
    vec![
        "G a",
        "F a",
        "a U b",
        "X a",
        "G F a",
        "F G a",
        "G(a -> F b)",
        "!(a U b)",
        "a <-> X b",
        "(a U b) U c",
        "G(a -> X(b U c))",
        "F(a & X !a) | G(b -> c)",
    ]
}

pub fn random_automaton(rng: &mut impl Rng, max_states: usize, aps: &[&str]) -> BuchiAutomaton {
    let n = rng.gen_range(1..=max_states);
    let mut initial = BTreeSet::from([0]);
    if n > 1 && rng.gen_bool(0.3) {
        initial.insert(rng.gen_range(1..n));
    }
    let accepting: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    let mut transitions = Vec::new();
    for source in 0..n {
        for _ in 0..rng.gen_range(0..=3) {
            let mut must_true = BTreeSet::new();
            let mut must_false = BTreeSet::new();
            for ap in aps {
                match rng.gen_range(0..3) {
                    0 => {
                        must_true.insert(ap.to_string());
                    }
                    1 => {
                        must_false.insert(ap.to_string());
                    }
                    _ => {}
                }
            }
            transitions.push(Transition {
                source,
                label: SymbolicLabel::new(must_true, must_false).unwrap(),
                target: rng.gen_range(0..n),
            });
        }
    }
    BuchiAutomaton::new(
        aps.iter().map(|s| s.to_string()),
        n,
        initial,
        accepting,
        transitions,
    )
    .unwrap()
}

pub fn random_formula(rng: &mut impl Rng, depth: usize, aps: &[&str]) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(aps[rng.gen_range(0..aps.len())]),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..11) {
        0 => Formula::not(random_formula(rng, d, aps)),
        1 => Formula::next(random_formula(rng, d, aps)),
        2 => Formula::eventually(random_formula(rng, d, aps)),
        3 => Formula::globally(random_formula(rng, d, aps)),
        4 => Formula::and(random_formula(rng, d, aps), random_formula(rng, d, aps)),
        5 => Formula::or(random_formula(rng, d, aps), random_formula(rng, d, aps)),
        6 => Formula::implies(random_formula(rng, d, aps), random_formula(rng, d, aps)),
        7 => Formula::iff(random_formula(rng, d, aps), random_formula(rng, d, aps)),
        _ => Formula::until(random_formula(rng, d, aps), random_formula(rng, d, aps)),
    }
}
