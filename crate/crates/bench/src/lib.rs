//! Shared inputs for the engine benchmarks.

use ltlguard_core::ltl::{parse, Formula};

pub const BASE_RULE: &str = "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> G(straight_1km & arrive_destination)";
pub const TASK: &str = "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))";
pub const FINAL: &str = "X(destinationLeftOnMapleStreet) & G((location_start) -> (F(straight_200m) | G(!straight_200m))) & X(G(right_turn_Maple_St -> F(straight_500m & X(left_turn_Oak_St & F(straight_300m)))))";

pub const PATTERNS: [&str; 8] = [
    "G a",
    "F a",
    "a U b",
    "G(a -> F b)",
    "G F a",
    "F G a",
    "G(a -> X(b U c))",
    "(a U b) U (c U d)",
];

pub fn formula(text: &str) -> Formula {
    parse(text).expect("benchmark formulas parse")
}
