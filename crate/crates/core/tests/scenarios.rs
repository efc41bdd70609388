mod common;

use std::sync::Arc;

use common::*;
use ltlguard_core::agents::{AgentSettings, Agents, ScriptedBackend, TemplateId, Transcript};
use ltlguard_core::inclusion::{check_against_rules, InclusionOptions, RuleSet};
use ltlguard_core::pipeline::{
    initial_violation_survey, parse_dataset, run, run_benchmark, AgentPool, BenchmarkReport, Phase,
    PipelineConfig, PipelineResult, PipelineStatus, TaskEntry,
};

fn rules() -> RuleSet {
    RuleSet::parse(&read_fixture("base_rule.rules")).unwrap()
}

fn dataset(name: &str) -> Vec<TaskEntry> {
    parse_dataset(&read_fixture(name)).unwrap()
}

fn transcript(name: &str) -> Transcript {
    Transcript::parse(&read_fixture(name)).unwrap()
}

fn bench(d: &str, t: &str, config: &PipelineConfig) -> (BenchmarkReport, Vec<PipelineResult>) {
    run_benchmark(
        &dataset(d),
        &rules(),
        config,
        &AgentPool::scripted(transcript(t)),
    )
    .unwrap()
}

fn statuses(results: &[PipelineResult]) -> Vec<(&str, PipelineStatus, usize)> {
    results
        .iter()
        .map(|r| (r.id.as_str(), r.status, r.iterations_used))
        .collect()
}

#[test]
fn extraction_call_sequence() {
    let entries = transcript("running_example.transcript")
        .for_entry("running-example")
        .unwrap()
        .to_vec();
    let mut agents = Agents::new(
        Arc::new(ScriptedBackend::new(entries)),
        AgentSettings::default(),
    );
    let entry = &dataset("running_example.dataset")[0];
    let f = agents.extract_ltl(&entry.task, &entry.env).unwrap();
    assert_eq!(
        f,
        common::f("F(go_straight_200m) & X(G(right_turn_Maple_St -> F(go_straight_500m & X(left_turn_Oak_St & F(go_straight_300m)))))")
    );
    use TemplateId::*;
    let sequence: Vec<TemplateId> = agents.calls().iter().map(|c| c.template).collect();
    assert_eq!(
        sequence,
        vec![
            NlToLtl,
            LtlToNl,
            NlToLtl,
            SyntaxCorrection,
            LtlToNl,
            NlToLtl,
            SyntaxCorrection
        ]
    );
}

#[test]
fn running_example_exhausts_the_iteration_budget() {
    let (report, results) = bench(
        "running_example.dataset",
        "running_example.transcript",
        &PipelineConfig::default(),
    );
    assert_eq!(
        statuses(&results),
        vec![("running-example", PipelineStatus::NonOutput, 25)]
    );
    assert_eq!(report.output_count, 0);
    let aligned_task = results[0]
        .trace
        .iter()
        .find(|t| t.phase == Phase::Alignment)
        .and_then(|t| t.formula.clone())
        .unwrap();
    assert_eq!(common::f(&aligned_task), common::f(TASK));
}

#[test]
fn iteration_cap_is_honoured() {
    let config = PipelineConfig {
        max_iterations: 1,
        ..PipelineConfig::default()
    };
    let (_, results) = bench(
        "running_example.dataset",
        "running_example.transcript",
        &config,
    );
    assert_eq!(
        statuses(&results),
        vec![("running-example", PipelineStatus::NonOutput, 1)]
    );
}

#[test]
fn all_pass_scenario() {
    let (report, results) = bench(
        "table9.dataset",
        "all_pass.transcript",
        &PipelineConfig::default(),
    );
    assert_eq!(
        statuses(&results),
        vec![
            ("running-example", PipelineStatus::Compliant, 1),
            ("john-street", PipelineStatus::Compliant, 0),
            ("main-street", PipelineStatus::Compliant, 2),
        ]
    );
    assert_eq!(report.output_count, 3);
    assert_eq!(report.violations, 0);
    assert_eq!(report.average_iterations, Some(1.0));
}

#[test]
fn adversarial_scenario_never_emits_violations() {
    let (report, results) = bench(
        "adversarial.dataset",
        "adversarial.transcript",
        &PipelineConfig::default(),
    );
    let got: Vec<(&str, PipelineStatus)> = statuses(&results)
        .into_iter()
        .map(|(id, s, _)| (id, s))
        .collect();
    assert_eq!(
        got,
        vec![
            ("non-progressing", PipelineStatus::NonOutput),
            ("oscillating", PipelineStatus::NonOutput),
            ("malformed-then-valid", PipelineStatus::Compliant),
            ("weakened", PipelineStatus::Compliant),
        ]
    );
    assert_eq!(report.violations, 0);
    for r in &results {
        if let Some(f) = r.final_formula() {
            assert!(
                check_against_rules(&f, &rules(), false, InclusionOptions::default())
                    .all_included()
            );
        }
    }
}

#[test]
fn survey_stops_after_the_first_check() {
    let (report, results) = initial_violation_survey(
        &dataset("table9.dataset"),
        &rules(),
        &PipelineConfig::default(),
        &AgentPool::scripted(transcript("all_pass.transcript")),
    )
    .unwrap();
    assert!(results.iter().all(|r| r.iterations_used == 0));
    assert_eq!(report.output_count, 1);
    assert_eq!(results[1].status, PipelineStatus::Compliant);
}

#[test]
fn recorded_transcript_replays_identically() {
    let entry = &dataset("table9.dataset")[2];
    let t = transcript("all_pass.transcript");
    let first = run(
        entry,
        &rules(),
        &PipelineConfig::default(),
        AgentPool::scripted(t).backend_for(&entry.id),
    );
    let recorded = first.transcript();
    let replay = run(
        entry,
        &rules(),
        &PipelineConfig::default(),
        Arc::new(ScriptedBackend::new(recorded.clone())),
    );
    assert_eq!(replay.status, first.status);
    assert_eq!(replay.final_formula, first.final_formula);
    assert_eq!(replay.transcript(), recorded);
    let text = Transcript::render(&recorded);
    assert_eq!(Transcript::parse(&text).unwrap().shared, recorded);
}

#[test]
fn truncated_transcript_fails_extraction() {
    let entries: Vec<_> = transcript("running_example.transcript")
        .for_entry("running-example")
        .unwrap()[..2]
        .to_vec();
    let entry = &dataset("running_example.dataset")[0];
    let r = run(
        entry,
        &rules(),
        &PipelineConfig::default(),
        Arc::new(ScriptedBackend::new(entries)),
    );
    assert_eq!(r.status, PipelineStatus::ExtractionFailed);
    assert!(r.final_formula.is_none());
}

#[test]
fn report_json_round_trip() {
    let (report, _) = bench(
        "table9.dataset",
        "all_pass.transcript",
        &PipelineConfig::default(),
    );
    let json = report.to_json();
    assert_eq!(BenchmarkReport::from_json(&json).unwrap(), report);
    assert!(json.ends_with('\n'));
}

#[test]
fn parallel_and_sequential_agree() {
    let seq = bench(
        "table9.dataset",
        "all_pass.transcript",
        &PipelineConfig::default(),
    )
    .0;
    let par = bench(
        "table9.dataset",
        "all_pass.transcript",
        &PipelineConfig {
            parallel: true,
            ..PipelineConfig::default()
        },
    )
    .0;
    assert_eq!(seq.entries, par.entries);
}
