//! Büchi automata over `2^AP`: representation, translation from LTL, lasso
//! acceptance, products, emptiness and simulation relations.

mod buchi;
mod dot;
mod label;
mod lasso;
mod product;
mod simulation;
mod translate;

pub(crate) use buchi::Compiled;
pub use buchi::{BuchiAutomaton, Transition};
pub use dot::to_dot;
pub use label::SymbolicLabel;
pub use lasso::{accepts_lasso, find_accepting_lasso};
pub use product::product;
pub use simulation::{
    backward_simulation, forward_simulation, prune_with_simulation, SimulationKind,
    SimulationRelation,
};
pub use translate::translate;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomatonError {
    #[error("label requires '{0}' to be both true and false")]
    ContradictoryLabel(String),
    #[error("automaton format: {0}")]
    Format(String),
    #[error("state {0} out of range for {1} states")]
    StateOutOfRange(usize, usize),
    #[error("label atom '{0}' is not in the alphabet")]
    UnknownAtom(String),
    #[error("alphabet of {0} atoms exceeds the limit of 64")]
    AlphabetTooLarge(usize),
}
