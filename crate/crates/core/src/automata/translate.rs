//! LTL to Büchi translation.
//!
//! Expand-node tableau over the negation normal form, giving a generalized
//! automaton with one acceptance set per until-subformula, followed by
//! counter-based degeneralization. State labels of the tableau are moved
//! onto incoming transitions, with a fresh initial state in front.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use crate::ltl::Formula;

use super::buchi::{BuchiAutomaton, Transition};
use super::label::SymbolicLabel;

type SubId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Sub {
    True,
    False,
    Lit(String, bool),
    And(SubId, SubId),
    Or(SubId, SubId),
    Next(SubId),
    Until(SubId, SubId),
    Release(SubId, SubId),
}

/// Hash-consed subformulas of an NNF formula.
#[derive(Default)]
struct Closure {
    subs: Vec<Sub>,
    index: HashMap<Sub, SubId>,
}

impl Closure {
    fn intern(&mut self, s: Sub) -> SubId {
        if let Some(&id) = self.index.get(&s) {
            return id;
        }
        let id = self.subs.len();
        self.subs.push(s.clone());
        self.index.insert(s, id);
        id
    }

    fn add(&mut self, f: &Formula) -> SubId {
        use Formula::*;
        let s = match f {
            True => Sub::True,
            False => Sub::False,
            Atom(a) => Sub::Lit(a.clone(), true),
            Not(g) => match &**g {
                Atom(a) => Sub::Lit(a.clone(), false),
                _ => unreachable!("input is in negation normal form"),
            },
            And(l, r) => Sub::And(self.add(l), self.add(r)),
            Or(l, r) => Sub::Or(self.add(l), self.add(r)),
            Next(g) => Sub::Next(self.add(g)),
            Until(l, r) => Sub::Until(self.add(l), self.add(r)),
            Release(l, r) => Sub::Release(self.add(l), self.add(r)),
            Eventually(g) => {
                let t = self.intern(Sub::True);
                Sub::Until(t, self.add(g))
            }
            Globally(g) => {
                let f = self.intern(Sub::False);
                Sub::Release(f, self.add(g))
            }
            Implies(..) | Iff(..) => unreachable!("input is in negation normal form"),
        };
        self.intern(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Source {
    Init,
    Node(usize),
}

#[derive(Debug, Clone)]
struct Pending {
    incoming: BTreeSet<Source>,
    new: BTreeSet<SubId>,
    old: BTreeSet<SubId>,
    next: BTreeSet<SubId>,
}

/// A finished tableau node. Nodes that agree on literals, next-step
/// obligations and until fulfilment are interchangeable and get merged.
#[derive(Debug)]
struct Node {
    incoming: BTreeSet<Source>,
    literals: BTreeSet<SubId>,
    /// per until of the closure: not promised here, or fulfilled here
    fulfils: Vec<bool>,
}

type NodeKey = (BTreeSet<SubId>, BTreeSet<SubId>, Vec<bool>);

fn expand(closure: &Closure, root: SubId) -> Vec<Node> {
    let untils: Vec<(SubId, SubId)> = closure
        .subs
        .iter()
        .enumerate()
        .filter_map(|(id, s)| match *s {
            Sub::Until(_, r) => Some((id, r)),
            _ => None,
        })
        .collect();
    let mut nodes: Vec<Node> = Vec::new();
    let mut index: HashMap<NodeKey, usize> = HashMap::new();
    let mut work = vec![Pending {
        incoming: BTreeSet::from([Source::Init]),
        new: BTreeSet::from([root]),
        old: BTreeSet::new(),
        next: BTreeSet::new(),
    }];

    while let Some(mut p) = work.pop() {
        let Some(eta) = p.new.pop_first() else {
            let literals: BTreeSet<SubId> = p
                .old
                .iter()
                .copied()
                .filter(|&id| matches!(closure.subs[id], Sub::Lit(..)))
                .collect();
            let fulfils: Vec<bool> = untils
                .iter()
                .map(|(u, r)| !p.old.contains(u) || p.old.contains(r))
                .collect();
            let key = (literals, p.next, fulfils);
            if let Some(&id) = index.get(&key) {
                nodes[id].incoming.extend(p.incoming);
            } else {
                let id = nodes.len();
                work.push(Pending {
                    incoming: BTreeSet::from([Source::Node(id)]),
                    new: key.1.clone(),
                    old: BTreeSet::new(),
                    next: BTreeSet::new(),
                });
                nodes.push(Node {
                    incoming: p.incoming,
                    literals: key.0.clone(),
                    fulfils: key.2.clone(),
                });
                index.insert(key, id);
            }
            continue;
        };
        if p.old.contains(&eta) {
            work.push(p);
            continue;
        }
        let add_new = |p: &mut Pending, ids: &[SubId]| {
            for &id in ids {
                if !p.old.contains(&id) {
                    p.new.insert(id);
                }
            }
        };
        match &closure.subs[eta] {
            Sub::False => {}
            Sub::Lit(a, pos) => {
                let neg = closure.index.get(&Sub::Lit(a.clone(), !pos));
                if neg.is_some_and(|n| p.old.contains(n)) {
                    continue;
                }
                p.old.insert(eta);
                work.push(p);
            }
            Sub::True => {
                p.old.insert(eta);
                work.push(p);
            }
            &Sub::And(l, r) => {
                p.old.insert(eta);
                add_new(&mut p, &[l, r]);
                work.push(p);
            }
            &Sub::Next(g) => {
                p.old.insert(eta);
                p.next.insert(g);
                work.push(p);
            }
            &Sub::Or(l, r) => {
                p.old.insert(eta);
                let mut q = p.clone();
                add_new(&mut p, &[l]);
                add_new(&mut q, &[r]);
                // pushed so that the left branch is expanded first
                work.push(q);
                work.push(p);
            }
            &Sub::Until(l, r) => {
                p.old.insert(eta);
                let mut q = p.clone();
                add_new(&mut p, &[r]);
                add_new(&mut q, &[l]);
                q.next.insert(eta);
                work.push(q);
                work.push(p);
            }
            &Sub::Release(l, r) => {
                p.old.insert(eta);
                let mut q = p.clone();
                add_new(&mut p, &[l, r]);
                add_new(&mut q, &[r]);
                q.next.insert(eta);
                work.push(q);
                work.push(p);
            }
        }
    }
    nodes
}

/// Builds a Büchi automaton accepting exactly the words satisfying `f`.
/// The result is canonically numbered, so equal inputs give equal outputs.
pub fn translate(f: &Formula) -> BuchiAutomaton {
    let alphabet: Vec<String> = f.atomic_propositions().into_iter().collect();
    let mut closure = Closure::default();
    let root = closure.add(&f.to_nnf());
    let nodes = expand(&closure, root);

    // tableau node i becomes generalized state i + 1; state 0 is the entry
    let label_of = |n: &Node| -> SymbolicLabel {
        let mut label = SymbolicLabel::any();
        for &id in &n.literals {
            if let Sub::Lit(a, pos) = &closure.subs[id] {
                if *pos {
                    label.must_true.insert(a.clone());
                } else {
                    label.must_false.insert(a.clone());
                }
            }
        }
        label
    };
    let mut edges: BTreeMap<usize, Vec<(SymbolicLabel, usize)>> = BTreeMap::new();
    for (i, n) in nodes.iter().enumerate() {
        let label = label_of(n);
        for src in &n.incoming {
            let s = match src {
                Source::Init => 0,
                Source::Node(j) => j + 1,
            };
            edges.entry(s).or_default().push((label.clone(), i + 1));
        }
    }

    // an acceptance set containing every node constrains nothing
    let kept: Vec<usize> = (0..nodes.first().map_or(0, |n| n.fulfils.len()))
        .filter(|&k| nodes.iter().any(|n| !n.fulfils[k]))
        .collect();
    let in_set = |state: usize, k: usize| state != 0 && nodes[state - 1].fulfils[kept[k]];

    let sets = kept.len().max(1);
    let mut id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    id.insert((0, 0), 0);
    let mut transitions = Vec::new();
    let mut accepting = BTreeSet::new();
    while let Some((q, c)) = queue.pop_front() {
        let here = id[&(q, c)];
        let satisfied = if kept.is_empty() {
            q != 0
        } else {
            in_set(q, c)
        };
        if satisfied && c == 0 {
            accepting.insert(here);
        }
        let c_next = if satisfied { (c + 1) % sets } else { c };
        for (label, r) in edges.get(&q).into_iter().flatten() {
            let key = (*r, c_next);
            let fresh = id.len();
            let next_id = *id.entry(key).or_insert_with(|| {
                queue.push_back(key);
                fresh
            });
            transitions.push(Transition {
                source: here,
                label: label.clone(),
                target: next_id,
            });
        }
    }

    BuchiAutomaton::new(
        alphabet,
        id.len(),
        BTreeSet::from([0]),
        accepting,
        transitions,
    )
    .expect("tableau construction yields a valid automaton")
    .trimmed()
    .merge_identical()
}
