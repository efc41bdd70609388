use serde::{Deserialize, Serialize};

use crate::inclusion::{check_against_rules, InclusionOptions, RuleSet};
use crate::ltl::parse;

use super::{PipelineConfig, PipelineResult, PipelineStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Bench,
    Survey,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub id: String,
    pub status: PipelineStatus,
    pub final_formula: Option<String>,
    pub iterations_used: usize,
    pub agent_calls: usize,
    /// Outcome of the independent recheck; `None` when nothing was emitted.
    pub recheck_violation: Option<bool>,
}

/// Batch summary. Carries no timings, so equal inputs give equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub kind: ReportKind,
    pub seed: u64,
    pub max_iterations: usize,
    pub entries: Vec<EntrySummary>,
    pub output_count: usize,
    pub violations: usize,
    pub violation_rate: f64,
    /// Mean iterations over compliant outputs.
    pub average_iterations: Option<f64>,
}

impl BenchmarkReport {
    /// Summarizes `results`, re-checking every emitted formula against
    /// `rules` from scratch rather than trusting the loop's verdicts.
    pub fn from_results(
        kind: ReportKind,
        results: &[PipelineResult],
        rules: &RuleSet,
        config: &PipelineConfig,
    ) -> Self {
        let options = InclusionOptions {
            minimize: false,
            maxdepth: None,
        };
        let entries: Vec<EntrySummary> = results
            .iter()
            .map(|r| {
                let recheck_violation = r.final_formula.as_deref().map(|text| match parse(text) {
                    Ok(f) => !check_against_rules(&f, rules, false, options).all_included(),
                    Err(_) => true,
                });
                EntrySummary {
                    id: r.id.clone(),
                    status: r.status,
                    final_formula: r.final_formula.clone(),
                    iterations_used: r.iterations_used,
                    agent_calls: r.agent_calls().count(),
                    recheck_violation,
                }
            })
            .collect();
        let output_count = entries.iter().filter(|e| e.final_formula.is_some()).count();
        let violations = entries
            .iter()
            .filter(|e| e.recheck_violation == Some(true))
            .count();
        let violation_rate = if output_count == 0 {
            0.0
        } else {
            violations as f64 / output_count as f64
        };
        let compliant: Vec<usize> = entries
            .iter()
            .filter(|e| e.status == PipelineStatus::Compliant)
            .map(|e| e.iterations_used)
            .collect();
        let average_iterations = (!compliant.is_empty())
            .then(|| compliant.iter().sum::<usize>() as f64 / compliant.len() as f64);
        BenchmarkReport {
            kind,
            seed: config.seed,
            max_iterations: config.max_iterations,
            entries,
            output_count,
            violations,
            violation_rate,
            average_iterations,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{:<16} {:<18} {:>5} {:>6}  {}\n",
            "id", "status", "iters", "calls", "final formula"
        );
        for e in &self.entries {
            out.push_str(&format!(
                "{:<16} {:<18} {:>5} {:>6}  {}\n",
                e.id,
                e.status.as_str(),
                e.iterations_used,
                e.agent_calls,
                e.final_formula.as_deref().unwrap_or("-")
            ));
        }
        out.push_str(&format!(
            "outputs: {}/{}  violations: {}  violation rate: {:.1}%",
            self.output_count,
            self.entries.len(),
            self.violations,
            self.violation_rate * 100.0
        ));
        match self.average_iterations {
            Some(a) => out.push_str(&format!("  average iterations: {a:.2}\n")),
            None => out.push('\n'),
        }
        out
    }
}
