use std::collections::{BTreeMap, VecDeque};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{AgentError, TemplateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentRole {
    UserLlm,
    Aligner,
    Critic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentRequest {
    pub role: AgentRole,
    pub template: TemplateId,
    pub bindings: BTreeMap<String, String>,
    pub temperature: f64,
    pub max_output: u32,
}

impl AgentRequest {
    pub fn new(role: AgentRole, template: TemplateId) -> Self {
        AgentRequest {
            role,
            template,
            bindings: BTreeMap::new(),
            temperature: 0.0,
            max_output: 1024,
        }
    }

    pub fn bind(mut self, name: &str, value: impl Into<String>) -> Self {
        self.bindings.insert(name.to_string(), value.into());
        self
    }

    pub fn render(&self) -> Result<String, AgentError> {
        self.template.render(&self.bindings)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Usage {
    pub input_tokens: u64,
    pub output_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentResponse {
    pub text: String,
    pub usage: Usage,
    pub backend_id: String,
}

/// Text generation behind every agent role.
pub trait Backend: Send + Sync {
    fn id(&self) -> &str;
    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, AgentError>;
}

/// Ordered `(template, response)` pairs, optionally grouped per dataset
/// entry.
///
/// Text form: `>>> <template-id>` starts a response that runs up to the
/// next header; `=== <entry-id>` starts a section used only by that entry.
/// Lines before the first header that start with `#` are comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    pub shared: Vec<(TemplateId, String)>,
    pub sections: BTreeMap<String, Vec<(TemplateId, String)>>,
}

impl Transcript {
    pub fn parse(text: &str) -> Result<Self, AgentError> {
        let mut t = Transcript::default();
        let mut section: Option<String> = None;
        let mut current: Option<(TemplateId, Vec<&str>)> = None;
        let flush = |t: &mut Transcript,
                     section: &Option<String>,
                     current: Option<(TemplateId, Vec<&str>)>| {
            if let Some((id, lines)) = current {
                let body = lines.join("\n").trim().to_string();
                match section {
                    Some(s) => t.sections.entry(s.clone()).or_default().push((id, body)),
                    None => t.shared.push((id, body)),
                }
            }
        };
        for (i, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix(">>>") {
                flush(&mut t, &section, current.take());
                let id = rest
                    .trim()
                    .parse()
                    .map_err(|_| AgentError::TranscriptFormat {
                        line: i + 1,
                        message: format!("unknown template id '{}'", rest.trim()),
                    })?;
                current = Some((id, Vec::new()));
            } else if let Some(rest) = line.strip_prefix("===") {
                flush(&mut t, &section, current.take());
                let name = rest.trim();
                if name.is_empty() {
                    return Err(AgentError::TranscriptFormat {
                        line: i + 1,
                        message: "empty section name".into(),
                    });
                }
                section = Some(name.to_string());
                t.sections.entry(name.to_string()).or_default();
            } else if let Some((_, lines)) = &mut current {
                lines.push(line);
            } else if !(line.trim().is_empty() || line.starts_with('#')) {
                return Err(AgentError::TranscriptFormat {
                    line: i + 1,
                    message: "text before the first '>>>' header".into(),
                });
            }
        }
        flush(&mut t, &section, current);
        Ok(t)
    }

    /// The entries for `entry`: its own section when present, else the
    /// shared list.
    pub fn for_entry(&self, entry: &str) -> Option<&[(TemplateId, String)]> {
        self.sections.get(entry).map(Vec::as_slice)
    }

    pub fn render(entries: &[(TemplateId, String)]) -> String {
        let mut out = String::new();
        for (id, text) in entries {
            out.push_str(&format!(">>> {id}\n{text}\n"));
        }
        out
    }
}

/// Replays a transcript strictly in order.
#[derive(Debug, Default)]
pub struct ScriptedBackend {
    queue: Mutex<VecDeque<(TemplateId, String)>>,
}

impl ScriptedBackend {
    pub fn new(entries: impl IntoIterator<Item = (TemplateId, String)>) -> Self {
        ScriptedBackend {
            queue: Mutex::new(entries.into_iter().collect()),
        }
    }

    pub fn remaining(&self) -> usize {
        self.queue.lock().expect("transcript lock").len()
    }
}

fn word_count(s: &str) -> u64 {
    s.split_whitespace().count() as u64
}

impl Backend for ScriptedBackend {
    fn id(&self) -> &str {
        "scripted"
    }

    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, AgentError> {
        let prompt = req.render()?;
        let mut queue = self.queue.lock().expect("transcript lock");
        let Some((expected, _)) = queue.front() else {
            return Err(AgentError::TranscriptExhausted(req.template));
        };
        if *expected != req.template {
            return Err(AgentError::TranscriptMismatch {
                expected: *expected,
                got: req.template,
            });
        }
        let (_, text) = queue.pop_front().expect("front checked");
        Ok(AgentResponse {
            usage: Usage {
                input_tokens: word_count(&prompt),
                output_tokens: word_count(&text),
            },
            text,
            backend_id: self.id().to_string(),
        })
    }
}

pub const ENV_ENDPOINT: &str = "LTLGUARD_ENDPOINT";
pub const ENV_MODEL: &str = "LTLGUARD_MODEL";
pub const ENV_API_KEY: &str = "LTLGUARD_API_KEY";
pub const ENV_TIMEOUT: &str = "LTLGUARD_TIMEOUT_SECS";

const DEFAULT_ENDPOINT: &str = "https://api.openai.com/v1/chat/completions";
const DEFAULT_MODEL: &str = "gpt-4";

/// Chat-completion endpoint reached over HTTP.
pub struct RemoteBackend {
    endpoint: String,
    model: String,
    api_key: String,
    agent: ureq::Agent,
    pub retries: u32,
    pub backoff: Duration,
}

impl RemoteBackend {
    pub fn from_env() -> Result<Self, AgentError> {
        let api_key = std::env::var(ENV_API_KEY)
            .ok()
            .filter(|k| !k.trim().is_empty())
            .ok_or(AgentError::MissingCredential(ENV_API_KEY))?;
        let endpoint = std::env::var(ENV_ENDPOINT).unwrap_or_else(|_| DEFAULT_ENDPOINT.into());
        let model = std::env::var(ENV_MODEL).unwrap_or_else(|_| DEFAULT_MODEL.into());
        let timeout = std::env::var(ENV_TIMEOUT)
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(60);
        Ok(RemoteBackend {
            endpoint,
            model,
            api_key,
            agent: ureq::AgentBuilder::new()
                .timeout(Duration::from_secs(timeout))
                .build(),
            retries: 3,
            backoff: Duration::from_millis(500),
        })
    }

    fn send(&self, body: &Value) -> Result<Value, (bool, String)> {
        let resp = self
            .agent
            .post(&self.endpoint)
            .set("Authorization", &format!("Bearer {}", self.api_key))
            .set("Content-Type", "application/json")
            .send_json(body.clone());
        match resp {
            Ok(r) => r.into_json().map_err(|e| (false, e.to_string())),
            Err(ureq::Error::Status(code, r)) => {
                let transient = code == 429 || code >= 500;
                let body = r.into_string().unwrap_or_default();
                Err((transient, format!("status {code}: {body}")))
            }
            Err(ureq::Error::Transport(t)) => Err((true, t.to_string())),
        }
    }
}

/// First text segment of a chat reply, in either common schema.
fn reply_text(v: &Value) -> Option<String> {
    v.pointer("/choices/0/message/content")
        .or_else(|| v.pointer("/content/0/text"))
        .and_then(Value::as_str)
        .map(str::to_string)
}

fn reply_usage(v: &Value) -> Usage {
    let get = |a: &str, b: &str| {
        v.pointer(a)
            .or_else(|| v.pointer(b))
            .and_then(Value::as_u64)
            .unwrap_or(0)
    };
    Usage {
        input_tokens: get("/usage/prompt_tokens", "/usage/input_tokens"),
        output_tokens: get("/usage/completion_tokens", "/usage/output_tokens"),
    }
}

impl Backend for RemoteBackend {
    fn id(&self) -> &str {
        &self.model
    }

    fn complete(&self, req: &AgentRequest) -> Result<AgentResponse, AgentError> {
        let prompt = req.render()?;
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": req.temperature,
            "max_tokens": req.max_output,
        });
        let mut attempt = 0;
        loop {
            match self.send(&body) {
                Ok(v) => {
                    let text = reply_text(&v)
                        .filter(|t| !t.trim().is_empty())
                        .ok_or_else(|| AgentError::Transport("reply has no text".into()))?;
                    return Ok(AgentResponse {
                        text,
                        usage: reply_usage(&v),
                        backend_id: self.model.clone(),
                    });
                }
                Err((true, _)) if attempt < self.retries => {
                    thread::sleep(self.backoff * 2u32.pow(attempt));
                    attempt += 1;
                }
                Err((_, msg)) => return Err(AgentError::Transport(msg)),
            }
        }
    }
}
