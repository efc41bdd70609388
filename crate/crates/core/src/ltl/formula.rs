use std::collections::{BTreeMap, BTreeSet};

/// LTL abstract syntax tree.
///
/// The surface grammar covers the core connectives plus the usual derived
/// operators. `Release` never comes out of the parser; it only appears in
/// trees produced by [`Formula::to_nnf`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Next(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
    Eventually(Box<Formula>),
    Globally(Box<Formula>),
}

/// Returns true if `name` is a legal atomic proposition name.
pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Self {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn until(l: Formula, r: Formula) -> Self {
        Formula::Until(Box::new(l), Box::new(r))
    }

    pub fn release(l: Formula, r: Formula) -> Self {
        Formula::Release(Box::new(l), Box::new(r))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn globally(f: Formula) -> Self {
        Formula::Globally(Box::new(f))
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) => vec![],
            Not(a) | Next(a) | Eventually(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | Implies(a, b) | Iff(a, b) | Until(a, b) | Release(a, b) => {
                vec![a, b]
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::size)
            .sum::<usize>()
    }

    /// Rebuilds the tree bottom-up, applying `f` to every node after its
    /// children have been rebuilt.
    fn map_bottom_up(&self, f: &mut impl FnMut(Formula) -> Formula) -> Formula {
        use Formula::*;
        let rebuilt = match self {
            True => True,
            False => False,
            Atom(a) => Atom(a.clone()),
            Not(a) => Formula::not(a.map_bottom_up(f)),
            Next(a) => Formula::next(a.map_bottom_up(f)),
            Eventually(a) => Formula::eventually(a.map_bottom_up(f)),
            Globally(a) => Formula::globally(a.map_bottom_up(f)),
            And(a, b) => Formula::and(a.map_bottom_up(f), b.map_bottom_up(f)),
            Or(a, b) => Formula::or(a.map_bottom_up(f), b.map_bottom_up(f)),
            Implies(a, b) => Formula::implies(a.map_bottom_up(f), b.map_bottom_up(f)),
            Iff(a, b) => Formula::iff(a.map_bottom_up(f), b.map_bottom_up(f)),
            Until(a, b) => Formula::until(a.map_bottom_up(f), b.map_bottom_up(f)),
            Release(a, b) => Formula::release(a.map_bottom_up(f), b.map_bottom_up(f)),
        };
        f(rebuilt)
    }

    /// Atomic propositions occurring in the formula, sorted and deduplicated.
    pub fn atomic_propositions(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<String>) {
        if let Formula::Atom(a) = self {
            out.insert(a.clone());
        }
        for c in self.children() {
            c.collect_atoms(out);
        }
    }

    /// Renames atoms according to `substitution`; atoms without an entry are
    /// left alone.
    pub fn rewrite_aps(&self, substitution: &BTreeMap<String, String>) -> Formula {
        self.map_bottom_up(&mut |node| match node {
            Formula::Atom(a) => match substitution.get(&a) {
                Some(b) => Formula::Atom(b.clone()),
                None => Formula::Atom(a),
            },
            other => other,
        })
    }

    /// Rewrites into the core connectives {true, atom, !, &, X, U}.
    pub fn to_core(&self) -> Formula {
        use Formula::*;
        self.map_bottom_up(&mut |node| match node {
            False => Formula::not(True),
            Or(a, b) => Formula::not(Formula::and(Formula::not(*a), Formula::not(*b))),
            Implies(a, b) => Formula::not(Formula::and(*a, Formula::not(*b))),
            Iff(a, b) => {
                let ab = Formula::not(Formula::and((*a).clone(), Formula::not((*b).clone())));
                let ba = Formula::not(Formula::and(*b, Formula::not(*a)));
                Formula::and(ab, ba)
            }
            Eventually(a) => Formula::until(True, *a),
            Globally(a) => Formula::not(Formula::until(True, Formula::not(*a))),
            Release(a, b) => Formula::not(Formula::until(Formula::not(*a), Formula::not(*b))),
            other => other,
        })
    }

    /// Negation normal form: negation only directly above atoms, no `->` or
    /// `<->`. May introduce `Release`.
    pub fn to_nnf(&self) -> Formula {
        nnf(self, false)
    }

    /// True if negations appear only directly above atoms and no implication
    /// or equivalence is present.
    pub fn is_nnf(&self) -> bool {
        use Formula::*;
        match self {
            Not(a) => matches!(**a, Atom(_)),
            Implies(..) | Iff(..) => false,
            _ => self.children().into_iter().all(Formula::is_nnf),
        }
    }

    /// Same tree with every atom name replaced by the empty string.
    pub fn erase_atoms(&self) -> Formula {
        self.map_bottom_up(&mut |node| match node {
            Formula::Atom(_) => Formula::Atom(String::new()),
            other => other,
        })
    }
}

fn nnf(f: &Formula, negated: bool) -> Formula {
    use Formula::*;
    match (f, negated) {
        (True, false) | (False, true) => True,
        (True, true) | (False, false) => False,
        (Atom(a), false) => Atom(a.clone()),
        (Atom(a), true) => Formula::not(Atom(a.clone())),
        (Not(a), n) => nnf(a, !n),
        (And(a, b), false) => Formula::and(nnf(a, false), nnf(b, false)),
        (And(a, b), true) => Formula::or(nnf(a, true), nnf(b, true)),
        (Or(a, b), false) => Formula::or(nnf(a, false), nnf(b, false)),
        (Or(a, b), true) => Formula::and(nnf(a, true), nnf(b, true)),
        (Implies(a, b), false) => Formula::or(nnf(a, true), nnf(b, false)),
        (Implies(a, b), true) => Formula::and(nnf(a, false), nnf(b, true)),
        (Iff(a, b), false) => Formula::and(
            Formula::or(nnf(a, true), nnf(b, false)),
            Formula::or(nnf(a, false), nnf(b, true)),
        ),
        (Iff(a, b), true) => Formula::or(
            Formula::and(nnf(a, false), nnf(b, true)),
            Formula::and(nnf(a, true), nnf(b, false)),
        ),
        (Next(a), n) => Formula::next(nnf(a, n)),
        (Until(a, b), false) => Formula::until(nnf(a, false), nnf(b, false)),
        (Until(a, b), true) => Formula::release(nnf(a, true), nnf(b, true)),
        (Release(a, b), false) => Formula::release(nnf(a, false), nnf(b, false)),
        (Release(a, b), true) => Formula::until(nnf(a, true), nnf(b, true)),
        (Eventually(a), false) => Formula::eventually(nnf(a, false)),
        (Eventually(a), true) => Formula::globally(nnf(a, true)),
        (Globally(a), false) => Formula::globally(nnf(a, false)),
        (Globally(a), true) => Formula::eventually(nnf(a, true)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("a")
    }
    fn b() -> Formula {
        Formula::atom("b")
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("right_turn_Maple_St"));
        assert!(is_identifier("_x1"));
        assert!(!is_identifier("1x"));
        assert!(!is_identifier(""));
        assert!(!is_identifier("a-b"));
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(
            Formula::not(Formula::globally(a())).to_nnf(),
            Formula::eventually(Formula::not(a()))
        );
        assert_eq!(
            Formula::not(Formula::until(a(), b())).to_nnf(),
            Formula::release(Formula::not(a()), Formula::not(b()))
        );
        assert_eq!(
            Formula::implies(a(), b()).to_nnf(),
            Formula::or(Formula::not(a()), b())
        );
    }

    #[test]
    fn core_has_no_derived_operators() {
        let f = Formula::iff(
            Formula::globally(Formula::implies(a(), Formula::eventually(b()))),
            Formula::or(Formula::False, a()),
        );
        fn core_only(f: &Formula) -> bool {
            use Formula::*;
            match f {
                True | Atom(_) => true,
                Not(x) | Next(x) => core_only(x),
                And(x, y) | Until(x, y) => core_only(x) && core_only(y),
                _ => false,
            }
        }
        assert!(core_only(&f.to_core()));
    }

    #[test]
    fn atoms_sorted_and_deduplicated() {
        let f = Formula::and(Formula::and(b(), a()), Formula::not(a()));
        let aps: Vec<_> = f.atomic_propositions().into_iter().collect();
        assert_eq!(aps, vec!["a", "b"]);
        assert!(Formula::True.atomic_propositions().is_empty());
    }

    #[test]
    fn rewrite_renames_only_mapped_atoms() {
        let f = Formula::until(a(), Formula::and(a(), Formula::atom("c")));
        let map = BTreeMap::from([("a".to_string(), "b".to_string())]);
        assert_eq!(
            f.rewrite_aps(&map),
            Formula::until(b(), Formula::and(b(), Formula::atom("c")))
        );
        assert_eq!(f.rewrite_aps(&BTreeMap::new()), f);
    }
}
