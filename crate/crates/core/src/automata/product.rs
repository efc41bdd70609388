use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::buchi::{BuchiAutomaton, Transition};

/// Intersection of two Büchi automata over the union of their alphabets.
///
/// States are `(p, q, track)`. Track 0 waits for an accepting state of `a`,
/// track 1 for one of `b`; the accepting states are the track-0 states whose
/// `a` component is accepting. Only reachable states are built.
pub fn product(a: &BuchiAutomaton, b: &BuchiAutomaton) -> BuchiAutomaton {
    let alphabet: BTreeSet<String> = a.alphabet().iter().chain(b.alphabet()).cloned().collect();

    let mut id: BTreeMap<(usize, usize, u8), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &p in a.initial() {
        for &q in b.initial() {
            let key = (p, q, 0);
            id.insert(key, id.len());
            queue.push_back(key);
        }
    }
    let initial: BTreeSet<usize> = (0..id.len()).collect();
    let mut accepting = BTreeSet::new();
    let mut transitions = Vec::new();

    while let Some((p, q, track)) = queue.pop_front() {
        let here = id[&(p, q, track)];
        if track == 0 && a.is_accepting(p) {
            accepting.insert(here);
        }
        let next_track = match track {
            0 if a.is_accepting(p) => 1,
            1 if b.is_accepting(q) => 0,
            t => t,
        };
        for ta in a.outgoing(p) {
            for tb in b.outgoing(q) {
                let Some(label) = ta.label.conjoin(&tb.label) else {
                    continue;
                };
                let key = (ta.target, tb.target, next_track);
                let fresh = id.len();
                let target = *id.entry(key).or_insert_with(|| {
                    queue.push_back(key);
                    fresh
                });
                transitions.push(Transition {
                    source: here,
                    label,
                    target,
                });
            }
        }
    }

    BuchiAutomaton::new(alphabet, id.len(), initial, accepting, transitions)
        .expect("product of valid automata is valid")
}
