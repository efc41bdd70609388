use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::ltl::{parse, render_diagnostics, Formula};

use super::{check_inclusion_with, InclusionError, InclusionOptions, InclusionVerdict};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub formula: Formula,
    pub priority: i64,
}

/// Rules ordered by descending priority, ties kept in file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleSet {
    rules: Vec<Rule>,
}

impl RuleSet {
    pub fn new(rules: Vec<Rule>) -> Result<Self, InclusionError> {
        let mut seen = BTreeSet::new();
        for (i, r) in rules.iter().enumerate() {
            if !seen.insert(r.name.clone()) {
                return Err(InclusionError::RuleFile {
                    line: i + 1,
                    message: format!("duplicate rule name '{}'", r.name),
                });
            }
        }
        let mut rules = rules;
        rules.sort_by_key(|r| std::cmp::Reverse(r.priority));
        Ok(RuleSet { rules })
    }

    /// `name | priority | ltl` per line; blank lines and `#` comments skipped.
    pub fn parse(text: &str) -> Result<Self, InclusionError> {
        let mut rules = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| InclusionError::RuleFile {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.splitn(3, '|').map(str::trim).collect();
            let [name, priority, ltl] = fields[..] else {
                return Err(err("expected 'name | priority | ltl'".into()));
            };
            if name.is_empty() {
                return Err(err("empty rule name".into()));
            }
            if !seen.insert(name.to_string()) {
                return Err(err(format!("duplicate rule name '{name}'")));
            }
            let priority: i64 = priority
                .parse()
                .map_err(|_| err(format!("bad priority '{priority}'")))?;
            let formula = parse(ltl).map_err(|d| err(render_diagnostics(&d)))?;
            rules.push(Rule {
                name: name.to_string(),
                formula,
                priority,
            });
        }
        RuleSet::new(rules)
    }

    pub fn single(name: &str, formula: Formula) -> Self {
        RuleSet {
            rules: vec![Rule {
                name: name.to_string(),
                formula,
                priority: 0,
            }],
        }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct RuleCheck {
    /// One entry per rule, in priority order.
    pub results: Vec<(String, Result<InclusionVerdict, InclusionError>)>,
    /// Index of the highest-priority rule that is not included.
    pub repair_target: Option<usize>,
}

impl RuleCheck {
    pub fn all_included(&self) -> bool {
        self.results
            .iter()
            .all(|(_, r)| matches!(r, Ok(v) if v.is_included()))
    }

    pub fn first_error(&self) -> Option<(&str, &InclusionError)> {
        self.results.iter().find_map(|(n, r)| match r {
            Err(e) => Some((n.as_str(), e)),
            Ok(_) => None,
        })
    }
}

/// Checks `phi` against every rule separately, optionally in parallel.
pub fn check_against_rules(
    phi: &Formula,
    rules: &RuleSet,
    parallel: bool,
    options: InclusionOptions,
) -> RuleCheck {
    let check = |r: &Rule| {
        (
            r.name.clone(),
            check_inclusion_with(phi, &r.formula, options),
        )
    };
    let results: Vec<_> = if parallel {
        rules.rules.par_iter().map(check).collect()
    } else {
        rules.rules.iter().map(check).collect()
    };
    let repair_target = results
        .iter()
        .position(|(_, r)| matches!(r, Ok(v) if !v.is_included()));
    RuleCheck {
        results,
        repair_target,
    }
}
