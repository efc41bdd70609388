use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::automata::{
    forward_simulation, BuchiAutomaton, Compiled, SimulationRelation, Transition,
};
use crate::ltl::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergenceStep {
    pub pair: (usize, usize),
    pub symbol: Symbol,
}

/// A synchronized path through the pair graph ending at a pair where
/// `failing_symbol` is enabled in the first automaton and not in the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivergencePath {
    pub steps: Vec<DivergenceStep>,
    pub terminal_pair: (usize, usize),
    pub failing_symbol: Symbol,
}

impl DivergencePath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `(0,0) -{a}-> (1,2) -{}-> (1,3) !{b}`
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            out.push_str(&format!("({},{}) -{}-> ", s.pair.0, s.pair.1, s.symbol));
        }
        out.push_str(&format!(
            "({},{}) !{}",
            self.terminal_pair.0, self.terminal_pair.1, self.failing_symbol
        ));
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expanded_pairs: u64,
    pub symbol_comparisons: u64,
}

/// Breadth-first search over state pairs from `I1 × I2` for a pair and a
/// symbol that the first automaton can read and the second cannot.
///
/// Pairs are visited at most once and at depth at most `maxdepth`; symbols
/// are tried in increasing bit-mask order over the sorted union alphabet.
/// Successor pairs are pruned by subsumption: when some successor `q'` of
/// the second automaton forward-simulates `p'` in the disjoint union, only
/// those `q'` are paired with `p'`; otherwise every `q'` is.
/// Returns the path (rebuilt from the parent map) together with counters
/// whose bounds `n1·n2` and `n1·n2·2^|AP|` are asserted.
pub fn extract_divergence_path(
    a1: &BuchiAutomaton,
    a2: &BuchiAutomaton,
    maxdepth: usize,
) -> (Option<DivergencePath>, SearchStats) {
    let alphabet: Vec<String> = a1
        .alphabet()
        .iter()
        .chain(a2.alphabet())
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let c1 = Compiled::new(a1, &alphabet);
    let c2 = Compiled::new(a2, &alphabet);
    let (n1, n2) = (c1.num_states(), c2.num_states());
    let m = c1.num_symbols();

    let sim = union_simulation(a1, a2, &alphabet);
    let pair_up = |p2s: &[usize], q2s: &[usize]| -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for &p2 in p2s {
            let matching: Vec<usize> = q2s
                .iter()
                .copied()
                .filter(|&q2| sim.contains(p2, n1 + q2))
                .collect();
            let chosen = if matching.is_empty() {
                q2s
            } else {
                &matching[..]
            };
            out.extend(chosen.iter().map(|&q2| (p2, q2)));
        }
        out
    };

    let mut stats = SearchStats::default();
    let mut visited = vec![false; n1 * n2];
    let mut parent: BTreeMap<(usize, usize), ((usize, usize), u64)> = BTreeMap::new();
    let mut depth: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut starts = pair_up(&c1.initial, &c2.initial);
    starts.sort_unstable();
    for s in starts {
        depth.entry(s).or_insert(0);
        queue.push_back(s);
    }

    let mut found = None;
    'bfs: while let Some((p, q)) = queue.pop_front() {
        if visited[p * n2 + q] {
            continue;
        }
        visited[p * n2 + q] = true;
        stats.expanded_pairs += 1;
        let d = depth[&(p, q)];
        for sym in 0..m {
            stats.symbol_comparisons += 1;
            let next1: Vec<usize> = c1.post(p, sym).collect();
            if next1.is_empty() {
                continue;
            }
            let next2: Vec<usize> = c2.post(q, sym).collect();
            if next2.is_empty() {
                found = Some(((p, q), sym));
                break 'bfs;
            }
            if d >= maxdepth {
                continue;
            }
            for key in pair_up(&next1, &next2) {
                if !visited[key.0 * n2 + key.1] && !depth.contains_key(&key) {
                    depth.insert(key, d + 1);
                    parent.insert(key, ((p, q), sym));
                    queue.push_back(key);
                }
            }
        }
    }

    assert!(
        stats.expanded_pairs <= (n1 * n2) as u64,
        "expanded pairs exceed n1*n2"
    );
    assert!(
        stats.symbol_comparisons <= (n1 * n2) as u64 * m,
        "symbol comparisons exceed n1*n2*m"
    );

    let path = found.map(|(terminal, sym)| {
        let mut steps = Vec::new();
        let mut at = terminal;
        while let Some(&(prev, s)) = parent.get(&at) {
            steps.push(DivergenceStep {
                pair: prev,
                symbol: c1.symbol_of(s),
            });
            at = prev;
        }
        steps.reverse();
        DivergencePath {
            steps,
            terminal_pair: terminal,
            failing_symbol: c1.symbol_of(sym),
        }
    });
    (path, stats)
}

/// Forward simulation on the disjoint union; states of `a2` are shifted by
/// `a1.num_states()`.
fn union_simulation(
    a1: &BuchiAutomaton,
    a2: &BuchiAutomaton,
    alphabet: &[String],
) -> SimulationRelation {
    let n1 = a1.num_states();
    let shift = |q: usize| q + n1;
    let transitions = a1
        .transitions()
        .iter()
        .cloned()
        .chain(a2.transitions().iter().map(|t| Transition {
            source: shift(t.source),
            label: t.label.clone(),
            target: shift(t.target),
        }));
    let union = BuchiAutomaton::new(
        alphabet.to_vec(),
        n1 + a2.num_states(),
        a1.initial()
            .iter()
            .copied()
            .chain(a2.initial().iter().map(|&q| shift(q)))
            .collect(),
        a1.accepting()
            .iter()
            .copied()
            .chain(a2.accepting().iter().map(|&q| shift(q)))
            .collect(),
        transitions,
    )
    .expect("union of valid automata is valid");
    forward_simulation(&union)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::translate;
    use crate::ltl::parse;

    fn t(s: &str) -> BuchiAutomaton {
        translate(&parse(s).unwrap())
    }

    #[test]
    fn identical_automata_never_diverge() {
        for f in ["G a", "F a", "a U b", "G(a -> F b)"] {
            let a = t(f);
            let n = a.num_states();
            assert!(extract_divergence_path(&a, &a, n * n).0.is_none(), "{f}");
        }
    }

    #[test]
    fn eventually_against_always() {
        let a1 = t("F a");
        let a2 = t("G a");
        let maxdepth = a1.num_states() * a2.num_states();
        let (path, stats) = extract_divergence_path(&a1, &a2, maxdepth);
        let path = path.expect("F a admits a step that G a forbids");
        let c1 = Compiled::new(&a1, &["a".to_string()]);
        let c2 = Compiled::new(&a2, &["a".to_string()]);
        let (p, q) = path.terminal_pair;
        let m = c1.mask_of(&path.failing_symbol);
        assert!(c1.post(p, m).next().is_some());
        assert!(c2.post(q, m).next().is_none());
        assert!(!path.failing_symbol.holds("a"));
        assert!(stats.expanded_pairs >= 1);
    }

    #[test]
    fn steps_follow_synchronized_transitions() {
        let a1 = t("X X !a");
        let a2 = t("X X a");
        let (path, _) = extract_divergence_path(&a1, &a2, 100);
        let path = path.unwrap();
        let al = vec!["a".to_string()];
        let (c1, c2) = (Compiled::new(&a1, &al), Compiled::new(&a2, &al));
        let mut pairs: Vec<(usize, usize)> = path.steps.iter().map(|s| s.pair).collect();
        pairs.push(path.terminal_pair);
        for (i, s) in path.steps.iter().enumerate() {
            let m = c1.mask_of(&s.symbol);
            let (p2, q2) = pairs[i + 1];
            assert!(c1.post(s.pair.0, m).any(|x| x == p2));
            assert!(c2.post(s.pair.1, m).any(|x| x == q2));
        }
        assert_eq!(path.len(), 2);
    }
}
