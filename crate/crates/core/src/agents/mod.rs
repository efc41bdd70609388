//! Language-model roles: the user model (extraction, syntax correction,
//! revision), the aligner (atom matching) and the critic (counterexample
//! analysis), all behind one [`Backend`].

mod align;
mod backend;
mod critic;
mod template;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automata::BuchiAutomaton;
use crate::ltl::{parse, render, render_diagnostics, Formula, SyntaxDiagnostic};

pub use align::{best_match, rename_between, similarity, similarity_map, SIMILARITY_THRESHOLD};
pub use backend::{
    AgentRequest, AgentResponse, AgentRole, Backend, RemoteBackend, ScriptedBackend, Transcript,
    Usage, ENV_API_KEY, ENV_ENDPOINT, ENV_MODEL, ENV_TIMEOUT,
};
pub use critic::CriticGuidance;
pub use template::TemplateId;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AgentError {
    #[error("template {template} has no binding for {{{name}}}")]
    UnboundPlaceholder { template: TemplateId, name: String },
    #[error("unknown template id '{0}'")]
    UnknownTemplate(String),
    #[error("transcript line {line}: {message}")]
    TranscriptFormat { line: usize, message: String },
    #[error("transcript exhausted at a {0} request")]
    TranscriptExhausted(TemplateId),
    #[error("transcript expects {expected} but got a {got} request")]
    TranscriptMismatch {
        expected: TemplateId,
        got: TemplateId,
    },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("missing credential: set {0}")]
    MissingCredential(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("extraction failed: {0}")]
    ExtractionFailed(String),
    #[error("syntax correction failed after {attempts} attempts: {diagnostics}")]
    CorrectionFailed {
        attempts: usize,
        diagnostics: String,
    },
    #[error("critic reply lacks sections: {}", missing.join(", "))]
    GuidanceMalformed { missing: Vec<String> },
    #[error("revision failed: {0}")]
    RevisionFailed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlignMode {
    /// Local similarity matching only.
    Similarity,
    /// Ask the aligner, keep its answer only if it is a pure atom renaming.
    Llm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentSettings {
    pub syntax_retries: usize,
    pub reask: usize,
    pub temperature: f64,
    pub max_output: u32,
    pub align: AlignMode,
}

impl Default for AgentSettings {
    fn default() -> Self {
        AgentSettings {
            syntax_retries: 3,
            reask: 1,
            temperature: 0.0,
            max_output: 1024,
            align: AlignMode::Similarity,
        }
    }
}

/// One completed generation call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentCall {
    pub role: AgentRole,
    pub template: TemplateId,
    pub response: String,
}

/// Strips code fences, surrounding quotes and backticks, joins lines, and
/// turns `name = value` into the single atom `name_value`.
pub fn normalize_reply(text: &str) -> String {
    let mut s = text.trim();
    if let Some(start) = s.find("```") {
        let inner = &s[start + 3..];
        let inner = &inner[..inner.find("```").unwrap_or(inner.len())];
        s = match inner.split_once('\n') {
            Some((tag, rest))
                if !rest.trim().is_empty()
                    && tag.trim().chars().all(|c| c.is_ascii_alphanumeric()) =>
            {
                rest
            }
            _ => inner,
        };
    }
    let s = s
        .trim()
        .trim_matches(|c| c == '`' || c == '"' || c == '\'')
        .trim();
    let joined = s.split_whitespace().collect::<Vec<_>>().join(" ");
    joined
        .replace(" =", "=")
        .replace("= ", "=")
        .replace('=', "_")
}

pub fn parse_reply(text: &str) -> Result<Formula, Vec<SyntaxDiagnostic>> {
    parse(&normalize_reply(text))
}

/// The agent roles over one backend, with a log of every call made.
pub struct Agents {
    backend: Arc<dyn Backend>,
    pub settings: AgentSettings,
    calls: Vec<AgentCall>,
}

impl Agents {
    pub fn new(backend: Arc<dyn Backend>, settings: AgentSettings) -> Self {
        Agents {
            backend,
            settings,
            calls: Vec::new(),
        }
    }

    pub fn calls(&self) -> &[AgentCall] {
        &self.calls
    }

    /// Removes and returns the calls logged so far.
    pub fn take_calls(&mut self) -> Vec<AgentCall> {
        std::mem::take(&mut self.calls)
    }

    fn call(&mut self, mut req: AgentRequest) -> Result<String, AgentError> {
        req.temperature = self.settings.temperature;
        req.max_output = self.settings.max_output;
        let resp = self.backend.complete(&req)?;
        self.calls.push(AgentCall {
            role: req.role,
            template: req.template,
            response: resp.text.clone(),
        });
        Ok(resp.text)
    }

    /// Six-step extraction: NL to LTL-1, back to NL-1, to LTL-2, syntax
    /// check, LTL-2 to NL-2, and NL-2 to the final formula.
    pub fn extract_ltl(&mut self, task: &str, env: &str) -> Result<Formula, AgentError> {
        if task.trim().is_empty() {
            return Err(AgentError::Precondition("empty task".into()));
        }
        let nl = if env.trim().is_empty() {
            task.trim().to_string()
        } else {
            format!("{}\n{}", task.trim(), env.trim())
        };
        let nl_to_ltl =
            |nl: &str| AgentRequest::new(AgentRole::UserLlm, TemplateId::NlToLtl).bind("nl", nl);
        let ltl_to_nl =
            |ltl: &str| AgentRequest::new(AgentRole::UserLlm, TemplateId::LtlToNl).bind("ltl", ltl);

        let ltl1 = self.call(nl_to_ltl(&nl))?;
        let nl1 = self.call(ltl_to_nl(&normalize_reply(&ltl1)))?;
        let ltl2 = self.call(nl_to_ltl(nl1.trim()))?;
        let ltl2 = self
            .parse_or_correct(&ltl2)
            .map_err(|e| AgentError::ExtractionFailed(format!("step 4: {e}")))?;
        let nl2 = self.call(ltl_to_nl(&render(&ltl2)))?;
        let last = self.call(nl_to_ltl(nl2.trim()))?;
        self.parse_or_correct(&last)
            .map_err(|e| AgentError::ExtractionFailed(format!("step 6: {e}")))
    }

    fn parse_or_correct(&mut self, reply: &str) -> Result<Formula, AgentError> {
        let text = normalize_reply(reply);
        match parse(&text) {
            Ok(f) => Ok(f),
            Err(d) => self.correct_syntax(&text, &d),
        }
    }

    pub fn correct_syntax(
        &mut self,
        ltl_text: &str,
        diagnostics: &[SyntaxDiagnostic],
    ) -> Result<Formula, AgentError> {
        if diagnostics.is_empty() {
            return Err(AgentError::Precondition("no diagnostics to correct".into()));
        }
        let mut text = ltl_text.to_string();
        let mut diags = diagnostics.to_vec();
        for _ in 0..self.settings.syntax_retries {
            let req = AgentRequest::new(AgentRole::UserLlm, TemplateId::SyntaxCorrection)
                .bind("syntactic_check_output", render_diagnostics(&diags))
                .bind("ltl_formula", text.as_str());
            text = normalize_reply(&self.call(req)?);
            match parse(&text) {
                Ok(f) => return Ok(f),
                Err(d) => diags = d,
            }
        }
        Err(AgentError::CorrectionFailed {
            attempts: self.settings.syntax_retries,
            diagnostics: render_diagnostics(&diags),
        })
    }

    /// Renames atoms of `f` towards `library`. Never changes structure.
    pub fn align_aps(&mut self, f: &Formula, library: &[String]) -> Result<Formula, AgentError> {
        if library.is_empty() {
            return Err(AgentError::Precondition("empty atom library".into()));
        }
        if self.settings.align == AlignMode::Llm {
            if let Some(g) = self.align_remote(f, library) {
                return Ok(g);
            }
        }
        let g = f.rewrite_aps(&similarity_map(f, library));
        debug_assert_eq!(g.erase_atoms(), f.erase_atoms());
        Ok(g)
    }

    fn align_remote(&mut self, f: &Formula, library: &[String]) -> Option<Formula> {
        let originals = f.atomic_propositions();
        let req = AgentRequest::new(AgentRole::Aligner, TemplateId::ApMatching)
            .bind("LTL", render(f))
            .bind("atomic_proposition_library", library.join(", "));
        for _ in 0..=self.settings.reask {
            let Ok(reply) = self.call(req.clone()) else {
                return None;
            };
            let Ok(g) = parse_reply(&reply) else {
                continue;
            };
            let allowed = |v: &String| library.contains(v) || originals.contains(v);
            if rename_between(f, &g).is_some_and(|m| m.values().all(allowed)) {
                return Some(g);
            }
        }
        None
    }

    pub fn critique(
        &mut self,
        phi: &Formula,
        rule: &Formula,
        a1: &BuchiAutomaton,
        a2: &BuchiAutomaton,
        report: &str,
    ) -> Result<CriticGuidance, AgentError> {
        let req = AgentRequest::new(AgentRole::Critic, TemplateId::CriticAnalysis)
            .bind("LTL", render(phi))
            .bind("input_BA", a1.to_text())
            .bind("comparison_BA", a2.to_text())
            .bind("checking_output", report)
            .bind("comparison_LTL", render(rule));
        let mut missing = Vec::new();
        for _ in 0..=self.settings.reask {
            match CriticGuidance::parse(&self.call(req.clone())?) {
                Ok(g) => return Ok(g),
                Err(m) => missing = m,
            }
        }
        Err(AgentError::GuidanceMalformed {
            missing: missing.into_iter().map(str::to_string).collect(),
        })
    }

    pub fn revise(
        &mut self,
        phi: &Formula,
        guidance: &CriticGuidance,
        env: &str,
    ) -> Result<Formula, AgentError> {
        let mut understanding = guidance.render();
        if !env.trim().is_empty() {
            understanding.push_str(&format!("\nEnvironmental_Information: {}", env.trim()));
        }
        let req = AgentRequest::new(AgentRole::UserLlm, TemplateId::LtlRevision)
            .bind("LTL", render(phi))
            .bind("understanding_output", understanding);
        let reply = self.call(req)?;
        self.parse_or_correct(&reply).map_err(|e| match e {
            AgentError::CorrectionFailed { .. } => AgentError::RevisionFailed(e.to_string()),
            other => other,
        })
    }
}
