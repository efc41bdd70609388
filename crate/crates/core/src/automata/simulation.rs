use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::buchi::{BuchiAutomaton, Compiled, Transition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimulationKind {
    Forward,
    Backward,
}

/// A relation on the states of one automaton; `(p, r)` means `r` simulates `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationRelation {
    pub kind: SimulationKind,
    pub pairs: BTreeSet<(usize, usize)>,
}

impl SimulationRelation {
    pub fn contains(&self, p: usize, r: usize) -> bool {
        self.pairs.contains(&(p, r))
    }
}

/// Per concrete symbol, the successor (or predecessor) lists of every state.
/// Symbols that enable the same transitions are merged.
fn moves(a: &BuchiAutomaton, backward: bool) -> Vec<Vec<Vec<usize>>> {
    let c = Compiled::new(a, a.alphabet());
    let n = a.num_states();
    let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
    for mask in 0..c.num_symbols() {
        let mut step = vec![Vec::new(); n];
        for q in 0..n {
            for t in c.post(q, mask) {
                if backward {
                    step[t].push(q);
                } else {
                    step[q].push(t);
                }
            }
        }
        for s in &mut step {
            s.sort_unstable();
            s.dedup();
        }
        seen.insert(step);
    }
    seen.into_iter().collect()
}

fn refine(
    n: usize,
    steps: &[Vec<Vec<usize>>],
    mut allowed: impl FnMut(usize, usize) -> bool,
) -> BTreeSet<(usize, usize)> {
    let mut rel = vec![vec![false; n]; n];
    for p in 0..n {
        for r in 0..n {
            rel[p][r] = allowed(p, r);
        }
    }
    loop {
        let mut changed = false;
        for p in 0..n {
            for r in 0..n {
                if !rel[p][r] {
                    continue;
                }
                let ok = steps.iter().all(|step| {
                    step[p]
                        .iter()
                        .all(|&p2| step[r].iter().any(|&r2| rel[p2][r2]))
                });
                if !ok {
                    rel[p][r] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..n)
        .flat_map(|p| (0..n).map(move |r| (p, r)))
        .filter(|&(p, r)| rel[p][r])
        .collect()
}

/// The greatest forward simulation: `p ∈ F ⇒ r ∈ F`, and every move of `p`
/// on a symbol is matched by a move of `r` on the same symbol into the
/// relation.
pub fn forward_simulation(a: &BuchiAutomaton) -> SimulationRelation {
    let steps = moves(a, false);
    let pairs = refine(a.num_states(), &steps, |p, r| {
        !a.is_accepting(p) || a.is_accepting(r)
    });
    SimulationRelation {
        kind: SimulationKind::Forward,
        pairs,
    }
}

/// The greatest backward simulation: acceptance and initiality are
/// preserved, and every incoming move of `p'` is matched by an incoming move
/// of `r'` on the same symbol from a related state.
pub fn backward_simulation(a: &BuchiAutomaton) -> SimulationRelation {
    let steps = moves(a, true);
    let pairs = refine(a.num_states(), &steps, |p, r| {
        (!a.is_accepting(p) || a.is_accepting(r))
            && (!a.initial().contains(&p) || a.initial().contains(&r))
    });
    SimulationRelation {
        kind: SimulationKind::Backward,
        pairs,
    }
}

/// Quotient by mutual forward simulation. Each class is represented by its
/// smallest state; the result is canonically renumbered.
pub fn prune_with_simulation(a: &BuchiAutomaton) -> BuchiAutomaton {
    let sim = forward_simulation(a);
    let n = a.num_states();
    let rep: Vec<usize> = (0..n)
        .map(|p| {
            (0..n)
                .find(|&r| sim.contains(p, r) && sim.contains(r, p))
                .unwrap_or(p)
        })
        .collect();
    let initial = a.initial().iter().map(|&q| rep[q]).collect();
    let accepting = a.accepting().iter().map(|&q| rep[q]).collect();
    let transitions: Vec<Transition> = a
        .transitions()
        .iter()
        .map(|t| Transition {
            source: rep[t.source],
            label: t.label.clone(),
            target: rep[t.target],
        })
        .collect();
    BuchiAutomaton::new(a.alphabet().to_vec(), n, initial, accepting, transitions)
        .expect("quotient keeps ids in range")
        .canonical()
}
