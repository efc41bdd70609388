//! The extraction and repair loop over a rule set, and the benchmark
//! harness around it.

mod dataset;
mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agents::{
    AgentCall, AgentError, AgentSettings, Agents, AlignMode, Backend, ScriptedBackend, TemplateId,
    Transcript,
};
use crate::inclusion::{
    check_against_rules, render_counterexample_report, render_word, InclusionAutomata,
    InclusionOptions, RuleCheck, RuleSet,
};
use crate::ltl::{check_text, parse, render, Formula};

pub use dataset::{parse_dataset, TaskEntry};
pub use report::{BenchmarkReport, EntrySummary, ReportKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error("dataset line {line}: {message}")]
    Dataset { line: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub max_iterations: usize,
    pub syntax_retries: usize,
    pub parallel: bool,
    pub minimize: bool,
    pub align: AlignMode,
    /// Recorded in reports; the loop itself has no random choices.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_iterations: 25,
            syntax_retries: 3,
            parallel: false,
            minimize: true,
            align: AlignMode::Similarity,
            seed: 0,
        }
    }
}

impl PipelineConfig {
    fn settings(&self) -> AgentSettings {
        AgentSettings {
            syntax_retries: self.syntax_retries,
            align: self.align,
            ..AgentSettings::default()
        }
    }

    fn options(&self) -> InclusionOptions {
        InclusionOptions {
            minimize: self.minimize,
            ..InclusionOptions::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStatus {
    Compliant,
    NonOutput,
    ExtractionFailed,
    /// Translation or inclusion engine reported an internal inconsistency.
    EngineError,
}

impl PipelineStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PipelineStatus::Compliant => "compliant",
            PipelineStatus::NonOutput => "non-output",
            PipelineStatus::ExtractionFailed => "extraction-failed",
            PipelineStatus::EngineError => "engine-error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Extraction,
    Critique,
    Revision,
    Alignment,
    SyntaxCheck,
    InclusionCheck,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub phase: Phase,
    pub formula: Option<String>,
    pub rule: Option<String>,
    pub verdict: Option<String>,
    pub agent_calls: Vec<AgentCall>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineResult {
    pub id: String,
    pub status: PipelineStatus,
    /// Rendered final formula; present iff compliant.
    pub final_formula: Option<String>,
    pub iterations_used: usize,
    pub trace: Vec<TraceRecord>,
}

impl PipelineResult {
    pub fn final_formula(&self) -> Option<Formula> {
        self.final_formula
            .as_deref()
            .map(|s| parse(s).expect("rendered formulas parse"))
    }

    pub fn agent_calls(&self) -> impl Iterator<Item = &AgentCall> {
        self.trace.iter().flat_map(|r| r.agent_calls.iter())
    }

    /// The calls of this run as a transcript that replays it.
    pub fn transcript(&self) -> Vec<(TemplateId, String)> {
        self.agent_calls()
            .map(|c| (c.template, c.response.clone()))
            .collect()
    }
}

/// Union of the rules' atoms, sorted.
pub fn build_ap_library(rules: &RuleSet) -> Vec<String> {
    let set: BTreeSet<String> = rules
        .rules()
        .iter()
        .flat_map(|r| r.formula.atomic_propositions())
        .collect();
    set.into_iter().collect()
}

/// Where each dataset entry gets its backend from.
pub struct AgentPool {
    shared: Arc<dyn Backend>,
    /// Whether the shared backend must see entries one at a time, in order.
    shared_ordered: bool,
    sections: BTreeMap<String, Vec<(TemplateId, String)>>,
}

impl AgentPool {
    pub fn scripted(t: Transcript) -> Self {
        AgentPool {
            shared: Arc::new(ScriptedBackend::new(t.shared)),
            shared_ordered: true,
            sections: t.sections,
        }
    }

    pub fn remote(backend: Arc<dyn Backend>) -> Self {
        AgentPool {
            shared: backend,
            shared_ordered: false,
            sections: BTreeMap::new(),
        }
    }

    pub fn backend_for(&self, entry: &str) -> Arc<dyn Backend> {
        match self.sections.get(entry) {
            Some(s) => Arc::new(ScriptedBackend::new(s.clone())),
            None => self.shared.clone(),
        }
    }

    fn concurrent(&self, dataset: &[TaskEntry]) -> bool {
        !self.shared_ordered || dataset.iter().all(|e| self.sections.contains_key(&e.id))
    }
}

struct Loop<'a> {
    entry: &'a TaskEntry,
    rules: &'a RuleSet,
    config: &'a PipelineConfig,
    library: Vec<String>,
    agents: Agents,
    trace: Vec<TraceRecord>,
}

enum Checked {
    Done(RuleCheck),
    Engine(String),
}

impl Loop<'_> {
    fn record(
        &mut self,
        iteration: usize,
        phase: Phase,
        formula: Option<&Formula>,
    ) -> &mut TraceRecord {
        self.trace.push(TraceRecord {
            iteration,
            phase,
            formula: formula.map(render),
            rule: None,
            verdict: None,
            agent_calls: self.agents.take_calls(),
            note: None,
        });
        self.trace.last_mut().unwrap()
    }

    /// Alignment, syntax check and per-rule inclusion of a candidate.
    fn settle(&mut self, iteration: usize, f: Formula) -> Result<(Formula, Checked), AgentError> {
        let aligned = self.agents.align_aps(&f, &self.library)?;
        self.record(iteration, Phase::Alignment, Some(&aligned));
        let text = render(&aligned);
        let diags = check_text(&text);
        let aligned = if diags.is_empty() {
            aligned
        } else {
            self.agents.correct_syntax(&text, &diags)?
        };
        self.record(iteration, Phase::SyntaxCheck, Some(&aligned))
            .note = Some(format!("{} diagnostics", diags.len()));
        let check = check_against_rules(
            &aligned,
            self.rules,
            self.config.parallel,
            self.config.options(),
        );
        for (name, r) in &check.results {
            let verdict = match r {
                Ok(v) if v.is_included() => "included".to_string(),
                Ok(v) => format!(
                    "not-included: {}",
                    v.counterexample
                        .as_ref()
                        .map(ToString::to_string)
                        .unwrap_or_default()
                ),
                Err(e) => format!("error: {e}"),
            };
            let rec = self.record(iteration, Phase::InclusionCheck, Some(&aligned));
            rec.rule = Some(name.clone());
            rec.verdict = Some(verdict);
        }
        let checked = match check.first_error() {
            Some((name, e)) => Checked::Engine(format!("rule {name}: {e}")),
            None => Checked::Done(check),
        };
        Ok((aligned, checked))
    }

    fn finish(
        self,
        status: PipelineStatus,
        f: Option<&Formula>,
        iterations: usize,
    ) -> PipelineResult {
        PipelineResult {
            id: self.entry.id.clone(),
            status,
            final_formula: f.map(render),
            iterations_used: iterations,
            trace: self.trace,
        }
    }

    /// One critique-revise round against the highest-priority failure.
    fn repair(
        &mut self,
        iteration: usize,
        f: &Formula,
        check: &RuleCheck,
    ) -> Result<Formula, AgentError> {
        let target = check.repair_target.expect("a failing rule");
        let rule = &self.rules.rules()[target];
        let verdict = check.results[target]
            .1
            .as_ref()
            .expect("checked for errors");
        let aut = InclusionAutomata::build(f, &rule.formula);
        let report = render_counterexample_report(verdict, &aut.phi, &aut.psi);
        let word = render_word(verdict.counterexample.as_ref().unwrap(), &aut.phi, &aut.psi);
        let guidance = self
            .agents
            .critique(f, &rule.formula, &aut.phi, &aut.psi, &report);
        let rec = self.record(iteration, Phase::Critique, Some(f));
        rec.rule = Some(rule.name.clone());
        rec.verdict = Some(format!("not-included: {word}"));
        let guidance = guidance?;
        let revised = self.agents.revise(f, &guidance, &self.entry.env);
        self.record(iteration, Phase::Revision, revised.as_ref().ok());
        revised
    }
}

/// Runs extraction and the repair loop for one entry.
pub fn run(
    entry: &TaskEntry,
    rules: &RuleSet,
    config: &PipelineConfig,
    backend: Arc<dyn Backend>,
) -> PipelineResult {
    run_inner(entry, rules, config, backend, config.max_iterations)
}

fn run_inner(
    entry: &TaskEntry,
    rules: &RuleSet,
    config: &PipelineConfig,
    backend: Arc<dyn Backend>,
    max_iterations: usize,
) -> PipelineResult {
    let mut lp = Loop {
        entry,
        rules,
        config,
        library: build_ap_library(rules),
        agents: Agents::new(backend, config.settings()),
        trace: Vec::new(),
    };
    let extracted = lp.agents.extract_ltl(&entry.task, &entry.env);
    let rec = lp.record(0, Phase::Extraction, extracted.as_ref().ok());
    let f = match extracted {
        Ok(f) => f,
        Err(e) => {
            rec.note = Some(e.to_string());
            return lp.finish(PipelineStatus::ExtractionFailed, None, 0);
        }
    };
    let (mut f, mut check) = match lp.settle(0, f) {
        Ok((f, Checked::Done(c))) => (f, c),
        Ok((_, Checked::Engine(e))) => {
            lp.trace.last_mut().unwrap().note = Some(e);
            return lp.finish(PipelineStatus::EngineError, None, 0);
        }
        Err(e) => {
            lp.record(0, Phase::SyntaxCheck, None).note = Some(e.to_string());
            return lp.finish(PipelineStatus::ExtractionFailed, None, 0);
        }
    };
    let mut iteration = 0;
    while !check.all_included() {
        if iteration == max_iterations {
            return lp.finish(PipelineStatus::NonOutput, None, iteration);
        }
        iteration += 1;
        let settled = lp
            .repair(iteration, &f, &check)
            .and_then(|g| lp.settle(iteration, g));
        match settled {
            Ok((g, Checked::Done(c))) => {
                f = g;
                check = c;
            }
            Ok((_, Checked::Engine(e))) => {
                lp.trace.last_mut().unwrap().note = Some(e);
                return lp.finish(PipelineStatus::EngineError, None, iteration);
            }
            Err(e) => {
                let last = lp.trace.last_mut().unwrap();
                last.note = Some(match last.note.take() {
                    Some(n) => format!("{n}; {e}"),
                    None => e.to_string(),
                });
            }
        }
    }
    lp.finish(PipelineStatus::Compliant, Some(&f), iteration)
}

fn run_all(
    dataset: &[TaskEntry],
    rules: &RuleSet,
    config: &PipelineConfig,
    pool: &AgentPool,
    max_iterations: usize,
) -> Result<Vec<PipelineResult>, PipelineError> {
    if dataset.is_empty() {
        return Err(PipelineError::Precondition("empty dataset".into()));
    }
    if rules.is_empty() {
        return Err(PipelineError::Precondition("empty rule set".into()));
    }
    let one = |e: &TaskEntry| run_inner(e, rules, config, pool.backend_for(&e.id), max_iterations);
    Ok(if config.parallel && pool.concurrent(dataset) {
        dataset.par_iter().map(one).collect()
    } else {
        dataset.iter().map(one).collect()
    })
}

/// Runs every entry and rechecks each emitted formula independently.
pub fn run_benchmark(
    dataset: &[TaskEntry],
    rules: &RuleSet,
    config: &PipelineConfig,
    pool: &AgentPool,
) -> Result<(BenchmarkReport, Vec<PipelineResult>), PipelineError> {
    let results = run_all(dataset, rules, config, pool, config.max_iterations)?;
    let report = BenchmarkReport::from_results(ReportKind::Bench, &results, rules, config);
    Ok((report, results))
}

/// Extraction, alignment and a single inclusion round, without repair.
pub fn initial_violation_survey(
    dataset: &[TaskEntry],
    rules: &RuleSet,
    config: &PipelineConfig,
    pool: &AgentPool,
) -> Result<(BenchmarkReport, Vec<PipelineResult>), PipelineError> {
    let results = run_all(dataset, rules, config, pool, 0)?;
    let report = BenchmarkReport::from_results(ReportKind::Survey, &results, rules, config);
    Ok((report, results))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scripted(entries: &[(TemplateId, &str)]) -> Arc<dyn Backend> {
        Arc::new(ScriptedBackend::new(
            entries.iter().map(|(t, s)| (*t, s.to_string())),
        ))
    }

    fn extraction(f: &str) -> Vec<(TemplateId, &str)> {
        vec![
            (TemplateId::NlToLtl, f),
            (TemplateId::LtlToNl, "nl one"),
            (TemplateId::NlToLtl, f),
            (TemplateId::LtlToNl, "nl two"),
            (TemplateId::NlToLtl, f),
        ]
    }

    const GUIDANCE: &str =
        "Counterexample_Analysis: a\nProposed_Adjustments: b\nGeneral_Guidance: c";

    fn entry() -> TaskEntry {
        TaskEntry {
            id: "e".into(),
            task: "keep a".into(),
            env: "".into(),
        }
    }

    #[test]
    fn library_union() {
        let rs = RuleSet::parse("r1 | 1 | G(a -> b)\nr2 | 1 | F(b & c)\n").unwrap();
        assert_eq!(build_ap_library(&rs), ["a", "b", "c"]);
    }

    #[test]
    fn compliant_without_repair() {
        let rules = RuleSet::parse("r | 1 | F a").unwrap();
        let r = run(
            &entry(),
            &rules,
            &PipelineConfig::default(),
            scripted(&extraction("G a")),
        );
        assert_eq!(r.status, PipelineStatus::Compliant);
        assert_eq!(r.iterations_used, 0);
        assert_eq!(r.final_formula().unwrap(), parse("G a").unwrap());
    }

    #[test]
    fn one_repair_round() {
        let rules = RuleSet::parse("r | 1 | G a").unwrap();
        let mut t = extraction("F a");
        t.push((TemplateId::CriticAnalysis, GUIDANCE));
        t.push((TemplateId::LtlRevision, "G a"));
        let r = run(&entry(), &rules, &PipelineConfig::default(), scripted(&t));
        assert_eq!(r.status, PipelineStatus::Compliant);
        assert_eq!(r.iterations_used, 1);
        let phases: Vec<Phase> = r
            .trace
            .iter()
            .filter(|x| x.iteration == 1)
            .map(|x| x.phase)
            .collect();
        assert_eq!(
            phases,
            [
                Phase::Critique,
                Phase::Revision,
                Phase::Alignment,
                Phase::SyntaxCheck,
                Phase::InclusionCheck
            ]
        );
        // replaying the trace gives the same result
        let again = run(
            &entry(),
            &rules,
            &PipelineConfig::default(),
            Arc::new(ScriptedBackend::new(r.transcript())),
        );
        assert_eq!(again, r);
    }

    #[test]
    fn cap_gives_non_output() {
        let rules = RuleSet::parse("r | 1 | G a").unwrap();
        let mut t = extraction("F a");
        for _ in 0..3 {
            t.push((TemplateId::CriticAnalysis, GUIDANCE));
            t.push((TemplateId::LtlRevision, "F a"));
        }
        let config = PipelineConfig {
            max_iterations: 3,
            ..PipelineConfig::default()
        };
        let r = run(&entry(), &rules, &config, scripted(&t));
        assert_eq!(r.status, PipelineStatus::NonOutput);
        assert_eq!(r.iterations_used, 3);
        assert!(r.final_formula.is_none());
    }

    #[test]
    fn agent_errors_run_into_the_cap() {
        let rules = RuleSet::parse("r | 1 | G a").unwrap();
        let r = run(
            &entry(),
            &rules,
            &PipelineConfig::default(),
            scripted(&extraction("F a")),
        );
        assert_eq!(r.status, PipelineStatus::NonOutput);
        assert_eq!(r.iterations_used, 25);
        assert!(r
            .trace
            .last()
            .unwrap()
            .note
            .as_ref()
            .unwrap()
            .contains("exhausted"));
    }

    #[test]
    fn extraction_failure() {
        let rules = RuleSet::parse("r | 1 | G a").unwrap();
        let r = run(&entry(), &rules, &PipelineConfig::default(), scripted(&[]));
        assert_eq!(r.status, PipelineStatus::ExtractionFailed);
    }

    #[test]
    fn benchmark_preconditions() {
        let rules = RuleSet::parse("r | 1 | G a").unwrap();
        let pool = AgentPool::scripted(Transcript::default());
        assert!(run_benchmark(&[], &rules, &PipelineConfig::default(), &pool).is_err());
        assert!(run_benchmark(
            &[entry()],
            &RuleSet::default(),
            &PipelineConfig::default(),
            &pool
        )
        .is_err());
    }
}
