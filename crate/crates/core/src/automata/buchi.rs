use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::ltl::Symbol;

use super::label::SymbolicLabel;
use super::lasso::sccs;
use super::AutomatonError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub source: usize,
    pub label: SymbolicLabel,
    pub target: usize,
}

/// A Büchi automaton over `2^alphabet` with symbolic transition labels.
/// States are dense ids `0..num_states`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton {
    alphabet: Vec<String>,
    num_states: usize,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    transitions: Vec<Transition>,
}

impl BuchiAutomaton {
    /// Validates ids and labels; transitions are sorted and deduplicated.
    pub fn new(
        alphabet: impl IntoIterator<Item = String>,
        num_states: usize,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
        transitions: impl IntoIterator<Item = Transition>,
    ) -> Result<Self, AutomatonError> {
        let alphabet: BTreeSet<String> = alphabet.into_iter().collect();
        let mut transitions: Vec<Transition> = transitions.into_iter().collect();
        for &s in initial.iter().chain(accepting.iter()) {
            if s >= num_states {
                return Err(AutomatonError::StateOutOfRange(s, num_states));
            }
        }
        for t in &transitions {
            for s in [t.source, t.target] {
                if s >= num_states {
                    return Err(AutomatonError::StateOutOfRange(s, num_states));
                }
            }
            if let Some(ap) = t.label.atoms().find(|a| !alphabet.contains(*a)) {
                return Err(AutomatonError::UnknownAtom(ap.clone()));
            }
        }
        if alphabet.len() > 64 {
            return Err(AutomatonError::AlphabetTooLarge(alphabet.len()));
        }
        transitions.sort();
        transitions.dedup();
        Ok(BuchiAutomaton {
            alphabet: alphabet.into_iter().collect(),
            num_states,
            initial,
            accepting,
            transitions,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    pub fn outgoing(&self, q: usize) -> impl Iterator<Item = &Transition> {
        // transitions are sorted by source first
        let start = self.transitions.partition_point(|t| t.source < q);
        self.transitions[start..]
            .iter()
            .take_while(move |t| t.source == q)
    }

    /// Same automaton over a larger alphabet; labels keep their constraints
    /// and the new atoms are unconstrained.
    pub fn with_alphabet(&self, alphabet: &[String]) -> Result<Self, AutomatonError> {
        let mut ext: BTreeSet<String> = self.alphabet.iter().cloned().collect();
        ext.extend(alphabet.iter().cloned());
        BuchiAutomaton::new(
            ext,
            self.num_states,
            self.initial.clone(),
            self.accepting.clone(),
            self.transitions.clone(),
        )
    }

    /// Renumbers states in breadth-first order from the initial states,
    /// following transitions in label order, and drops unreachable states.
    pub fn canonical(&self) -> Self {
        let mut order: Vec<usize> = Vec::new();
        let mut id: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &q in &self.initial {
            id.insert(q, order.len());
            order.push(q);
            queue.push_back(q);
        }
        while let Some(q) = queue.pop_front() {
            let mut outs: Vec<&Transition> = self.outgoing(q).collect();
            outs.sort_by(|a, b| (&a.label, a.target).cmp(&(&b.label, b.target)));
            for t in outs {
                if !id.contains_key(&t.target) {
                    id.insert(t.target, order.len());
                    order.push(t.target);
                    queue.push_back(t.target);
                }
            }
        }
        let transitions = self
            .transitions
            .iter()
            .filter_map(|t| {
                Some(Transition {
                    source: *id.get(&t.source)?,
                    label: t.label.clone(),
                    target: *id.get(&t.target)?,
                })
            })
            .collect::<Vec<_>>();
        BuchiAutomaton::new(
            self.alphabet.clone(),
            order.len(),
            self.initial.iter().map(|q| id[q]).collect(),
            self.accepting
                .iter()
                .filter_map(|q| id.get(q).copied())
                .collect(),
            transitions,
        )
        .expect("renumbering preserves validity")
    }

    /// Drops states from which no accepting cycle is reachable, keeping the
    /// initial states. The language is unchanged.
    pub fn trimmed(&self) -> Self {
        let n = self.num_states;
        let mut adj = vec![Vec::new(); n];
        let mut rev = vec![Vec::new(); n];
        for t in &self.transitions {
            adj[t.source].push(t.target);
            rev[t.target].push(t.source);
        }
        let roots: Vec<usize> = self.initial.iter().copied().collect();
        let (comp, nontrivial) = sccs(&adj, &roots);
        let mut live = vec![false; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&q| self.is_accepting(q) && comp[q] != usize::MAX && nontrivial[comp[q]])
            .collect();
        for &q in &stack {
            live[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        let transitions: Vec<Transition> = self
            .transitions
            .iter()
            .filter(|t| live[t.source] && live[t.target])
            .cloned()
            .collect();
        let accepting = self
            .accepting
            .iter()
            .copied()
            .filter(|&q| live[q])
            .collect();
        BuchiAutomaton::new(
            self.alphabet.clone(),
            n,
            self.initial.clone(),
            accepting,
            transitions,
        )
        .expect("trimming preserves validity")
        .canonical()
    }

    /// Merges states with the same acceptance and the same outgoing
    /// transitions until none are left. The language is unchanged.
    pub fn merge_identical(&self) -> Self {
        let mut a = self.clone();
        loop {
            let mut rep: Vec<usize> = (0..a.num_states).collect();
            let mut seen: BTreeMap<(bool, Vec<(&SymbolicLabel, usize)>), usize> = BTreeMap::new();
            for q in 0..a.num_states {
                let sig: Vec<(&SymbolicLabel, usize)> =
                    a.outgoing(q).map(|t| (&t.label, t.target)).collect();
                rep[q] = *seen.entry((a.is_accepting(q), sig)).or_insert(q);
            }
            if rep.iter().enumerate().all(|(q, &r)| q == r) {
                return a;
            }
            let transitions: Vec<Transition> = a
                .transitions
                .iter()
                .map(|t| Transition {
                    source: rep[t.source],
                    label: t.label.clone(),
                    target: rep[t.target],
                })
                .collect();
            a = BuchiAutomaton::new(
                a.alphabet.clone(),
                a.num_states,
                a.initial.iter().map(|&q| rep[q]).collect(),
                a.accepting.iter().map(|&q| rep[q]).collect(),
                transitions,
            )
            .expect("merging preserves validity")
            .canonical();
        }
    }

    /// Plain-text form: header lines then one `src "label" dst` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let join = |xs: &BTreeSet<usize>| {
            xs.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(out, "aps: {}", self.alphabet.join(" ")).unwrap();
        writeln!(out, "states: {}", self.num_states).unwrap();
        writeln!(out, "initial: {}", join(&self.initial)).unwrap();
        writeln!(out, "accepting: {}", join(&self.accepting)).unwrap();
        for t in &self.transitions {
            writeln!(out, "{} \"{}\" {}", t.source, t.label, t.target).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, AutomatonError> {
        let mut aps: Option<Vec<String>> = None;
        let mut states: Option<usize> = None;
        let mut initial: Option<BTreeSet<usize>> = None;
        let mut accepting: Option<BTreeSet<usize>> = None;
        let mut transitions = Vec::new();
        let bad =
            |line: usize, msg: &str| AutomatonError::Format(format!("line {}: {msg}", line + 1));
        let ids = |line: usize, rest: &str| -> Result<BTreeSet<usize>, AutomatonError> {
            rest.split_whitespace()
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| bad(line, "expected state id"))
                })
                .collect()
        };

        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("aps:") {
                aps = Some(rest.split_whitespace().map(str::to_string).collect());
            } else if let Some(rest) = line.strip_prefix("states:") {
                states = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| bad(ln, "bad state count"))?,
                );
            } else if let Some(rest) = line.strip_prefix("initial:") {
                initial = Some(ids(ln, rest)?);
            } else if let Some(rest) = line.strip_prefix("accepting:") {
                accepting = Some(ids(ln, rest)?);
            } else {
                let (src, rest) = line
                    .split_once('"')
                    .ok_or_else(|| bad(ln, "missing label"))?;
                let (label, dst) = rest
                    .split_once('"')
                    .ok_or_else(|| bad(ln, "unterminated label"))?;
                transitions.push(Transition {
                    source: src.trim().parse().map_err(|_| bad(ln, "bad source"))?,
                    label: label.parse()?,
                    target: dst.trim().parse().map_err(|_| bad(ln, "bad target"))?,
                });
            }
        }
        BuchiAutomaton::new(
            aps.ok_or_else(|| AutomatonError::Format("missing 'aps:' line".into()))?,
            states.ok_or_else(|| AutomatonError::Format("missing 'states:' line".into()))?,
            initial.unwrap_or_default(),
            accepting.unwrap_or_default(),
            transitions,
        )
    }
}

/// Bit-mask view of an automaton over a fixed alphabet, for the inner loops.
/// Bit `i` of a symbol mask is atom `alphabet[i]`.
pub(crate) struct Compiled {
    pub alphabet: Vec<String>,
    pub initial: Vec<usize>,
    pub accepting: Vec<bool>,
    /// per state: (must-true mask, must-false mask, target)
    pub out: Vec<Vec<(u64, u64, usize)>>,
}

impl Compiled {
    /// `alphabet` must contain every atom of `a`.
    pub fn new(a: &BuchiAutomaton, alphabet: &[String]) -> Self {
        let index: BTreeMap<&str, usize> = alphabet
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mask = |set: &BTreeSet<String>| -> u64 {
            set.iter().fold(0, |m, ap| m | (1u64 << index[ap.as_str()]))
        };
        let mut out = vec![Vec::new(); a.num_states];
        for t in &a.transitions {
            out[t.source].push((
                mask(&t.label.must_true),
                mask(&t.label.must_false),
                t.target,
            ));
        }
        Compiled {
            alphabet: alphabet.to_vec(),
            initial: a.initial.iter().copied().collect(),
            accepting: (0..a.num_states).map(|q| a.is_accepting(q)).collect(),
            out,
        }
    }

    pub fn num_states(&self) -> usize {
        self.out.len()
    }

    /// Number of concrete symbols, `2^|alphabet|`.
    pub fn num_symbols(&self) -> u64 {
        1u64 << self.alphabet.len()
    }

    pub fn mask_of(&self, s: &Symbol) -> u64 {
        self.alphabet
            .iter()
            .enumerate()
            .filter(|(_, a)| s.holds(a))
            .fold(0, |m, (i, _)| m | (1 << i))
    }

    pub fn symbol_of(&self, mask: u64) -> Symbol {
        self.alphabet
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }

    pub fn post(&self, q: usize, sym: u64) -> impl Iterator<Item = usize> + '_ {
        self.out[q]
            .iter()
            .filter(move |(p, n, _)| sym & p == *p && sym & n == 0)
            .map(|&(_, _, t)| t)
    }
}
