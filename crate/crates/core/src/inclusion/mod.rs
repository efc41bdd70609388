//! Language inclusion between formula automata, counterexample words and
//! divergence paths, and per-rule checking.
//!
//! `L(φ) ⊆ L(ψ)` is decided as emptiness of `A_φ × A_¬ψ`, where `A_¬ψ` is
//! the translation of the negation normal form of `!ψ`. A non-empty product
//! yields a lasso word; it is checked against both automata before a
//! verdict is returned.

mod divergence;
mod report;
mod rules;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::automata::{accepts_lasso, find_accepting_lasso, product, translate, BuchiAutomaton};
use crate::ltl::{eval_lasso, render, Formula, LassoWord};

pub use divergence::{extract_divergence_path, DivergencePath, DivergenceStep, SearchStats};
pub use report::{render_counterexample_report, render_word};
pub use rules::{check_against_rules, Rule, RuleCheck, RuleSet};

/// Recorded when a not-included pair has no enabled/disabled divergence
/// within the search depth.
pub const NO_DIVERGENCE_NOTE: &str = "divergence beyond product reachability";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InclusionError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("rule file line {line}: {message}")]
    RuleFile { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InclusionStatus {
    Included,
    NotIncluded,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionStats {
    pub expanded_pairs: u64,
    pub symbol_comparisons: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionVerdict {
    pub status: InclusionStatus,
    pub counterexample: Option<LassoWord>,
    pub divergence: Option<DivergencePath>,
    /// Set instead of `divergence` when the search finds none.
    pub divergence_note: Option<String>,
    pub stats: InclusionStats,
}

impl InclusionVerdict {
    pub fn is_included(&self) -> bool {
        self.status == InclusionStatus::Included
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InclusionOptions {
    /// Greedily shorten counterexamples.
    pub minimize: bool,
    /// Divergence search depth; `None` means `n1·n2`.
    pub maxdepth: Option<usize>,
}

impl Default for InclusionOptions {
    fn default() -> Self {
        InclusionOptions {
            minimize: true,
            maxdepth: None,
        }
    }
}

/// The automata a check works on: `A_φ`, `A_ψ` and `A_¬ψ`.
#[derive(Debug, Clone)]
pub struct InclusionAutomata {
    pub phi: BuchiAutomaton,
    pub psi: BuchiAutomaton,
    pub not_psi: BuchiAutomaton,
}

impl InclusionAutomata {
    pub fn build(phi: &Formula, psi: &Formula) -> Self {
        InclusionAutomata {
            phi: translate(phi),
            psi: translate(psi),
            not_psi: translate(&Formula::not(psi.clone()).to_nnf()),
        }
    }
}

pub fn check_inclusion(phi: &Formula, psi: &Formula) -> Result<InclusionVerdict, InclusionError> {
    check_inclusion_with(phi, psi, InclusionOptions::default())
}

pub fn check_inclusion_with(
    phi: &Formula,
    psi: &Formula,
    options: InclusionOptions,
) -> Result<InclusionVerdict, InclusionError> {
    let automata = InclusionAutomata::build(phi, psi);
    check_built(phi, psi, &automata, options)
}

pub(crate) fn check_built(
    phi: &Formula,
    psi: &Formula,
    automata: &InclusionAutomata,
    options: InclusionOptions,
) -> Result<InclusionVerdict, InclusionError> {
    let start = Instant::now();
    let p = product(&automata.phi, &automata.not_psi);
    let Some(mut word) = find_accepting_lasso(&p) else {
        return Ok(InclusionVerdict {
            status: InclusionStatus::Included,
            counterexample: None,
            divergence: None,
            divergence_note: None,
            stats: InclusionStats {
                elapsed_ms: start.elapsed().as_millis() as u64,
                ..Default::default()
            },
        });
    };
    if !accepts_lasso(&automata.phi, &word) || accepts_lasso(&automata.psi, &word) {
        return Err(InclusionError::InternalInconsistency(format!(
            "word {word} does not separate {} from {}",
            render(phi),
            render(psi)
        )));
    }
    if options.minimize {
        word = minimize_counterexample(phi, psi, word);
    }

    let (n1, n2) = (automata.phi.num_states(), automata.psi.num_states());
    let maxdepth = options.maxdepth.unwrap_or(n1 * n2);
    let (divergence, search) = extract_divergence_path(&automata.phi, &automata.psi, maxdepth);
    let divergence_note = divergence.is_none().then(|| NO_DIVERGENCE_NOTE.to_string());
    Ok(InclusionVerdict {
        status: InclusionStatus::NotIncluded,
        counterexample: Some(word),
        divergence,
        divergence_note,
        stats: InclusionStats {
            expanded_pairs: search.expanded_pairs,
            symbol_comparisons: search.symbol_comparisons,
            elapsed_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// Formula-level check: `w` satisfies `phi` and violates `psi`.
pub fn validate_counterexample(phi: &Formula, psi: &Formula, w: &LassoWord) -> bool {
    eval_lasso(phi, w) && !eval_lasso(psi, w)
}

/// Drops prefix symbols from the front and halves the cycle for as long as
/// the word stays a counterexample.
pub fn minimize_counterexample(phi: &Formula, psi: &Formula, mut w: LassoWord) -> LassoWord {
    loop {
        let mut changed = false;
        while !w.prefix.is_empty() {
            let shorter = LassoWord::new(w.prefix[1..].to_vec(), w.cycle.clone());
            if !validate_counterexample(phi, psi, &shorter) {
                break;
            }
            w = shorter;
            changed = true;
        }
        while w.cycle.len() > 1 {
            let half = LassoWord::new(w.prefix.clone(), w.cycle[..w.cycle.len() / 2].to_vec());
            if !validate_counterexample(phi, psi, &half) {
                break;
            }
            w = half;
            changed = true;
        }
        if !changed {
            return w;
        }
    }
}
