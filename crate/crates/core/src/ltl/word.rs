use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::Formula;

/// The set of atomic propositions that hold at one instant. Atoms not in
/// the set are false.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub BTreeSet<String>);

impl Symbol {
    pub fn empty() -> Self {
        Symbol(BTreeSet::new())
    }

    pub fn holds(&self, ap: &str) -> bool {
        self.0.contains(ap)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> Symbol {
        Symbol(
            self.0
                .iter()
                .map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone()))
                .collect(),
        )
    }
}

impl<S: Into<String>> FromIterator<S> for Symbol {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Symbol(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// An ultimately periodic word `prefix · cycle^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LassoWord {
    pub prefix: Vec<Symbol>,
    pub cycle: Vec<Symbol>,
}

impl LassoWord {
    /// Panics if `cycle` is empty.
    pub fn new(prefix: Vec<Symbol>, cycle: Vec<Symbol>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be non-empty");
        LassoWord { prefix, cycle }
    }

    /// Number of distinct positions: prefix plus one copy of the cycle.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symbol at position `i` of the infinite word.
    pub fn at(&self, i: usize) -> &Symbol {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in the folded representation.
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.len() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// Moves one cycle iteration into the prefix; denotes the same word.
    pub fn unroll(&self) -> LassoWord {
        let mut prefix = self.prefix.clone();
        prefix.extend(self.cycle.iter().cloned());
        LassoWord::new(prefix, self.cycle.clone())
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> LassoWord {
        LassoWord::new(
            self.prefix.iter().map(|s| s.rename(map)).collect(),
            self.cycle.iter().map(|s| s.rename(map)).collect(),
        )
    }

    /// All atoms that are true somewhere in the word.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .flat_map(|s| s.0.iter().cloned())
            .collect()
    }

    /// Whether the infinite word satisfies `f`.
    pub fn satisfies(&self, f: &Formula) -> bool {
        eval_lasso(f, self)
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.prefix {
            write!(f, "{s} ")?;
        }
        write!(f, "(")?;
        for (i, s) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")^w")
    }
}

/// Decides `w ⊨ f` exactly.
///
/// Every subformula is tabulated over the folded positions of the lasso,
/// where the last cycle position wraps back to the first. Until is a least
/// fixpoint and release a greatest fixpoint over that graph; both are solved
/// by backward sweeps that repeat until nothing changes, which takes at most
/// two sweeps over the cycle.
pub fn eval_lasso(f: &Formula, w: &LassoWord) -> bool {
    Evaluator { w }.table(f)[0]
}

struct Evaluator<'a> {
    w: &'a LassoWord,
}

impl Evaluator<'_> {
    fn table(&self, f: &Formula) -> Vec<bool> {
        use Formula::*;
        let n = self.w.len();
        match f {
            True => vec![true; n],
            False => vec![false; n],
            Atom(a) => (0..n).map(|i| self.w.at(i).holds(a)).collect(),
            Not(g) => self.table(g).into_iter().map(|v| !v).collect(),
            And(l, r) => zip(self.table(l), self.table(r), |a, b| a && b),
            Or(l, r) => zip(self.table(l), self.table(r), |a, b| a || b),
            Implies(l, r) => zip(self.table(l), self.table(r), |a, b| !a || b),
            Iff(l, r) => zip(self.table(l), self.table(r), |a, b| a == b),
            Next(g) => {
                let t = self.table(g);
                (0..n).map(|i| t[self.w.succ(i)]).collect()
            }
            Until(l, r) => self.until(&self.table(l), &self.table(r)),
            Eventually(g) => self.until(&vec![true; n], &self.table(g)),
            Release(l, r) => self.release(&self.table(l), &self.table(r)),
            Globally(g) => self.release(&vec![false; n], &self.table(g)),
        }
    }

    /// Least solution of `v[i] = r[i] || (l[i] && v[succ i])`.
    fn until(&self, l: &[bool], r: &[bool]) -> Vec<bool> {
        self.fixpoint(false, |i, next| r[i] || (l[i] && next))
    }

    /// Greatest solution of `v[i] = r[i] && (l[i] || v[succ i])`.
    fn release(&self, l: &[bool], r: &[bool]) -> Vec<bool> {
        self.fixpoint(true, |i, next| r[i] && (l[i] || next))
    }

    fn fixpoint(&self, init: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
        let n = self.w.len();
        let start = self.w.prefix.len();
        let mut v = vec![init; n];
        loop {
            let mut changed = false;
            for i in (start..n).rev() {
                let nv = step(i, v[self.w.succ(i)]);
                if nv != v[i] {
                    v[i] = nv;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in (0..start).rev() {
            v[i] = step(i, v[i + 1]);
        }
        v
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(x, y)| op(x, y)).collect()
}

/// All lassos with `|prefix| <= max_prefix` and `1 <= |cycle| <= max_cycle`
/// over the given atoms.
pub fn bounded_lassos(aps: &[String], max_prefix: usize, max_cycle: usize) -> Vec<LassoWord> {
    let symbols: Vec<Symbol> = (0u32..1 << aps.len())
        .map(|mask| {
            aps.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect();
    let sequences = |len: usize| -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|seq| {
                    symbols.iter().map(move |s| {
                        let mut next = seq.clone();
                        next.push(s.clone());
                        next
                    })
                })
                .collect();
        }
        out
    };
    let prefixes: Vec<Vec<Symbol>> = (0..=max_prefix).flat_map(sequences).collect();
    let cycles: Vec<Vec<Symbol>> = (1..=max_cycle).flat_map(sequences).collect();
    let mut out = Vec::with_capacity(prefixes.len() * cycles.len());
    for p in &prefixes {
        for c in &cycles {
            out.push(LassoWord::new(p.clone(), c.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse;

    fn sym(aps: &[&str]) -> Symbol {
        aps.iter().copied().collect()
    }

    fn eval(f: &str, prefix: &[&[&str]], cycle: &[&[&str]]) -> bool {
        let w = LassoWord::new(
            prefix.iter().map(|s| sym(s)).collect(),
            cycle.iter().map(|s| sym(s)).collect(),
        );
        eval_lasso(&parse(f).unwrap(), &w)
    }

    #[test]
    fn globally_and_eventually() {
        assert!(eval("G a", &[], &[&["a"]]));
        assert!(eval("F a", &[&[]], &[&["a"]]));
        assert!(!eval("G a", &[&[]], &[&["a"]]));
        assert!(!eval("F a", &[], &[&[]]));
    }

    #[test]
    fn until_clause() {
        assert!(eval("a U b", &[&["a"], &["a"], &["b"]], &[&[]]));
        assert!(!eval("a U b", &[&["a"], &[], &["b"]], &[&[]]));
        // b only reachable through the cycle wrap
        assert!(eval("X X (a U b)", &[], &[&["a"], &["b"], &["a"]]));
        assert!(!eval("a U b", &[], &[&["a"]]));
    }

    #[test]
    fn next_wraps_into_cycle() {
        // positions: {} {} {a} {} {a} ...
        assert!(eval("X X a", &[&[]], &[&[], &["a"]]));
        assert!(!eval("X X X a", &[&[]], &[&[], &["a"]]));
        assert!(eval("X X X X a", &[&[]], &[&[], &["a"]]));
    }

    #[test]
    fn infinitely_often() {
        assert!(eval("G F a", &[&["a"]], &[&[], &[], &["a"]]));
        assert!(!eval("G F a", &[&["a"]], &[&[]]));
        assert!(eval("F G !a", &[&["a"]], &[&[]]));
    }

    #[test]
    fn bounded_lasso_count() {
        let aps = vec!["a".to_string(), "b".to_string()];
        // (1 + 4 + 16) prefixes times (4 + 16) cycles
        assert_eq!(bounded_lassos(&aps, 2, 2).len(), 21 * 20);
        assert_eq!(bounded_lassos(&[], 3, 3).len(), 4 * 3);
    }

    #[test]
    fn unroll_preserves_word() {
        let w = LassoWord::new(vec![sym(&["a"])], vec![sym(&[]), sym(&["b"])]);
        let u = w.unroll();
        for i in 0..10 {
            assert_eq!(w.at(i), u.at(i));
        }
    }
}
