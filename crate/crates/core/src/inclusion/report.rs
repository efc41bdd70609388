use crate::automata::{accepts_lasso, BuchiAutomaton};
use crate::ltl::{LassoWord, Symbol};

use super::{InclusionVerdict, NO_DIVERGENCE_NOTE};

/// Renders a counterexample word as literal conjunctions, `u (v)^w`.
///
/// Each symbol shows only the literals the violation depends on: atom `x`
/// is printed at a position when flipping `x` there makes `a1` reject or
/// `a2` accept the word. A symbol with no such literal prints `t`, and an
/// all-`t` cycle after a constrained prefix is left out.
pub fn render_word(w: &LassoWord, a1: &BuchiAutomaton, a2: &BuchiAutomaton) -> String {
    let atoms: Vec<String> = a1
        .alphabet()
        .iter()
        .chain(a2.alphabet())
        .cloned()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let separates = |w: &LassoWord| accepts_lasso(a1, w) && !accepts_lasso(a2, w);

    let flip = |s: &Symbol, ap: &str| -> Symbol {
        let mut t = s.clone();
        if !t.0.remove(ap) {
            t.0.insert(ap.to_string());
        }
        t
    };
    let literals = |s: &Symbol, set: &dyn Fn(Symbol) -> LassoWord| -> String {
        let lits: Vec<String> = atoms
            .iter()
            .filter(|ap| !separates(&set(flip(s, ap))))
            .map(|ap| {
                if s.holds(ap) {
                    ap.clone()
                } else {
                    format!("!{ap}")
                }
            })
            .collect();
        if lits.is_empty() {
            "t".to_string()
        } else {
            lits.join(" & ")
        }
    };

    let mut parts = Vec::new();
    for i in 0..w.prefix.len() {
        parts.push(literals(&w.prefix[i], &|s| {
            let mut v = w.clone();
            v.prefix[i] = s;
            v
        }));
    }
    let cycle: Vec<String> = (0..w.cycle.len())
        .map(|i| {
            let lit = literals(&w.cycle[i], &|s| {
                let mut v = w.clone();
                v.cycle[i] = s;
                v
            });
            if w.cycle.len() > 1 && lit.contains(" & ") {
                format!("({lit})")
            } else {
                lit
            }
        })
        .collect();
    let cycle_free = cycle.iter().all(|c| c == "t");
    if cycle_free && parts.iter().any(|p| p != "t") {
        return parts.join(" ");
    }
    let cycle = if cycle_free {
        "t".to_string()
    } else {
        cycle.join(" ")
    };
    parts.push(format!("({cycle})^w"));
    parts.join(" ")
}

/// The checking-tool style report handed to the critic.
///
/// Panics if `v` is an included verdict.
pub fn render_counterexample_report(
    v: &InclusionVerdict,
    a1: &BuchiAutomaton,
    a2: &BuchiAutomaton,
) -> String {
    assert!(!v.is_included(), "report requires a not-included verdict");
    let w = v
        .counterexample
        .as_ref()
        .expect("not-included verdict carries a word");
    let mut out = String::new();
    out.push_str(&format!(
        "Aut A: of Trans. {}, of States {}.\n",
        a1.transitions().len(),
        a1.num_states()
    ));
    out.push_str(&format!(
        "Aut B: of Trans. {}, of States {}.\n",
        a2.transitions().len(),
        a2.num_states()
    ));
    out.push_str(&format!("Counterexample: {}\n", render_word(w, a1, a2)));
    match &v.divergence {
        Some(p) => out.push_str(&format!("Counterexample path: {}\n", p.render())),
        None => out.push_str(&format!(
            "Counterexample path: none ({})\n",
            v.divergence_note.as_deref().unwrap_or(NO_DIVERGENCE_NOTE)
        )),
    }
    out.push_str("Not included.\n");
    out.push_str(&format!("Time used(ms): {}.\n", v.stats.elapsed_ms));
    out
}
