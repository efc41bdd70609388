use std::collections::VecDeque;

use crate::ltl::{LassoWord, Symbol};

use super::buchi::{BuchiAutomaton, Compiled};
use super::label::SymbolicLabel;

/// Strongly connected components of a graph given as adjacency lists,
/// restricted to vertices reachable from `roots`. Returns the component id
/// of each vertex (`usize::MAX` when unreachable) and whether each
/// component contains at least one edge.
pub(crate) fn sccs(adj: &[Vec<usize>], roots: &[usize]) -> (Vec<usize>, Vec<bool>) {
    const UNSEEN: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut nontrivial: Vec<bool> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut counter = 0;

    for &root in roots {
        if index[root] != UNSEEN {
            continue;
        }
        // iterative Tarjan: (vertex, next edge position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = nontrivial.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = id;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                let has_edge = members.len() > 1 || adj[v].contains(&v);
                nontrivial.push(has_edge);
            }
        }
    }
    (comp, nontrivial)
}

/// Whether some run over `w` visits an accepting state infinitely often.
///
/// Runs the prefix to get the reachable state set, then searches the graph
/// of (state, cycle offset) pairs for a reachable cycle through an
/// accepting pair. Atoms outside the automaton's alphabet are ignored.
pub fn accepts_lasso(a: &BuchiAutomaton, w: &LassoWord) -> bool {
    if a.accepting().is_empty() {
        return false;
    }
    let c = Compiled::new(a, a.alphabet());
    let n = c.num_states();

    let mut current = vec![false; n];
    for &q in &c.initial {
        current[q] = true;
    }
    for s in &w.prefix {
        let m = c.mask_of(s);
        let mut next = vec![false; n];
        for q in (0..n).filter(|&q| current[q]) {
            for t in c.post(q, m) {
                next[t] = true;
            }
        }
        current = next;
    }

    let len = w.cycle.len();
    let masks: Vec<u64> = w.cycle.iter().map(|s| c.mask_of(s)).collect();
    let vertex = |q: usize, i: usize| q * len + i;
    let mut adj = vec![Vec::new(); n * len];
    for q in 0..n {
        for (i, &m) in masks.iter().enumerate() {
            let j = (i + 1) % len;
            for t in c.post(q, m) {
                adj[vertex(q, i)].push(vertex(t, j));
            }
        }
    }
    let roots: Vec<usize> = (0..n)
        .filter(|&q| current[q])
        .map(|q| vertex(q, 0))
        .collect();
    let (comp, nontrivial) = sccs(&adj, &roots);
    (0..n * len).any(|v| comp[v] != usize::MAX && nontrivial[comp[v]] && c.accepting[v / len])
}

/// A word accepted by `a`, or `None` when the language is empty.
///
/// Picks the accepting state in a non-trivial SCC that depth-first search
/// from the initial states, taking edges in (label, target) order, reaches
/// first, then closes the shortest cycle
/// through it inside its SCC. Labels become symbols via
/// [`SymbolicLabel::concretize`].
pub fn find_accepting_lasso(a: &BuchiAutomaton) -> Option<LassoWord> {
    let n = a.num_states();
    let mut adj = vec![Vec::new(); n];
    let mut out: Vec<Vec<(usize, &SymbolicLabel)>> = vec![Vec::new(); n];
    for t in a.transitions() {
        adj[t.source].push(t.target);
        out[t.source].push((t.target, &t.label));
    }
    for edges in &mut out {
        edges.sort_by(|x, y| x.1.cmp(y.1).then(x.0.cmp(&y.0)));
    }
    let roots: Vec<usize> = a.initial().iter().copied().collect();
    let (comp, nontrivial) = sccs(&adj, &roots);
    let good = |q: usize| a.is_accepting(q) && comp[q] != usize::MAX && nontrivial[comp[q]];

    // depth-first search in label order; the tree path to the first good
    // state is the lexicographically least such path
    let mut parent: Vec<Option<(usize, &SymbolicLabel)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut target = None;
    'roots: for &root in &roots {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        if good(root) {
            target = Some(root);
            break;
        }
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(&mut (q, ref mut pos)) = stack.last_mut() {
            let Some(&(r, l)) = out[q].get(*pos) else {
                stack.pop();
                continue;
            };
            *pos += 1;
            if seen[r] {
                continue;
            }
            seen[r] = true;
            parent[r] = Some((q, l));
            if good(r) {
                target = Some(r);
                break 'roots;
            }
            stack.push((r, 0));
        }
    }
    let target = target?;
    let mut prefix = Vec::new();
    let mut q = target;
    while let Some((p, l)) = parent[q] {
        prefix.push(l.concretize());
        q = p;
    }
    prefix.reverse();

    // shortest cycle through target within its SCC
    let scc = comp[target];
    let mut back: Vec<Option<(usize, &SymbolicLabel)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    let mut closing = None;
    for &(r, l) in &out[target] {
        if comp[r] != scc {
            continue;
        }
        if r == target {
            closing = Some((target, l));
            break;
        }
        if !seen[r] {
            seen[r] = true;
            back[r] = Some((target, l));
            queue.push_back(r);
        }
    }
    if closing.is_none() {
        'bfs: while let Some(q) = queue.pop_front() {
            for &(r, l) in &out[q] {
                if r == target {
                    closing = Some((q, l));
                    break 'bfs;
                }
                if comp[r] == scc && !seen[r] {
                    seen[r] = true;
                    back[r] = Some((q, l));
                    queue.push_back(r);
                }
            }
        }
    }
    let (last, last_label) = closing.expect("non-trivial SCC has a cycle through each member");
    let mut cycle: Vec<Symbol> = vec![last_label.concretize()];
    let mut q = last;
    while q != target {
        let (p, l) = back[q].expect("cycle path is connected");
        cycle.push(l.concretize());
        q = p;
    }
    cycle.reverse();
    let w = LassoWord::new(prefix, cycle);
    debug_assert!(accepts_lasso(a, &w));
    Some(w)
}
