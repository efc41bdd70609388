use std::collections::BTreeSet;
use std::fmt;

use crate::ltl::{is_identifier, Symbol};

use super::AutomatonError;

/// A conjunction of literals labelling a transition. It stands for every
/// symbol that contains all of `must_true` and none of `must_false`; the
/// empty label matches every symbol and prints as `t`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicLabel {
    pub must_true: BTreeSet<String>,
    pub must_false: BTreeSet<String>,
}

impl SymbolicLabel {
    /// The unconditional label.
    pub fn any() -> Self {
        SymbolicLabel::default()
    }

    /// Fails if some atom would have to be both true and false.
    pub fn new(
        must_true: BTreeSet<String>,
        must_false: BTreeSet<String>,
    ) -> Result<Self, AutomatonError> {
        if let Some(ap) = must_true.intersection(&must_false).next() {
            return Err(AutomatonError::ContradictoryLabel(ap.clone()));
        }
        Ok(SymbolicLabel {
            must_true,
            must_false,
        })
    }

    pub fn is_any(&self) -> bool {
        self.must_true.is_empty() && self.must_false.is_empty()
    }

    pub fn matches(&self, symbol: &Symbol) -> bool {
        self.must_true.iter().all(|a| symbol.holds(a))
            && !self.must_false.iter().any(|a| symbol.holds(a))
    }

    /// Conjunction of two labels, or `None` when it is unsatisfiable.
    pub fn conjoin(&self, other: &SymbolicLabel) -> Option<SymbolicLabel> {
        if !self.must_true.is_disjoint(&other.must_false)
            || !other.must_true.is_disjoint(&self.must_false)
        {
            return None;
        }
        Some(SymbolicLabel {
            must_true: self.must_true.union(&other.must_true).cloned().collect(),
            must_false: self.must_false.union(&other.must_false).cloned().collect(),
        })
    }

    /// The minimal symbol this label admits: exactly its positive atoms.
    pub fn concretize(&self) -> Symbol {
        Symbol(self.must_true.clone())
    }

    pub fn atoms(&self) -> impl Iterator<Item = &String> {
        self.must_true.iter().chain(self.must_false.iter())
    }
}

impl fmt::Display for SymbolicLabel {
    /// Literals in alphabetical order of their atom, joined with ` & `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_any() {
            return f.write_str("t");
        }
        let mut lits: Vec<(&String, bool)> = self
            .must_true
            .iter()
            .map(|a| (a, true))
            .chain(self.must_false.iter().map(|a| (a, false)))
            .collect();
        lits.sort();
        for (i, (a, positive)) in lits.into_iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            if !positive {
                f.write_str("!")?;
            }
            f.write_str(a)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SymbolicLabel {
    type Err = AutomatonError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "t" || s == "true" {
            return Ok(SymbolicLabel::any());
        }
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        for lit in s.split('&') {
            let lit = lit.trim();
            let (name, positive) = match lit.strip_prefix('!') {
                Some(rest) => (rest.trim(), false),
                None => (lit, true),
            };
            if !is_identifier(name) {
                return Err(AutomatonError::Format(format!(
                    "bad literal '{lit}' in label '{s}'"
                )));
            }
            if positive {
                pos.insert(name.to_string());
            } else {
                neg.insert(name.to_string());
            }
        }
        SymbolicLabel::new(pos, neg)
    }
}
