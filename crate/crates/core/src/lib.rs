pub mod agents;
pub mod automata;
pub mod inclusion;
pub mod ltl;
pub mod pipeline;
