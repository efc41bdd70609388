use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::AgentError;

/// Registered prompt templates, stored verbatim under `templates/`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TemplateId {
    NlToLtl,
    LtlToNl,
    ApMatching,
    SyntaxCorrection,
    CriticAnalysis,
    LtlRevision,
}

impl TemplateId {
    pub const ALL: [TemplateId; 6] = [
        TemplateId::NlToLtl,
        TemplateId::LtlToNl,
        TemplateId::ApMatching,
        TemplateId::SyntaxCorrection,
        TemplateId::CriticAnalysis,
        TemplateId::LtlRevision,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TemplateId::NlToLtl => "nl-to-ltl",
            TemplateId::LtlToNl => "ltl-to-nl",
            TemplateId::ApMatching => "ap-matching",
            TemplateId::SyntaxCorrection => "syntax-correction",
            TemplateId::CriticAnalysis => "critic-analysis",
            TemplateId::LtlRevision => "ltl-revision",
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            TemplateId::NlToLtl => include_str!("../../templates/nl-to-ltl.txt"),
            TemplateId::LtlToNl => include_str!("../../templates/ltl-to-nl.txt"),
            TemplateId::ApMatching => include_str!("../../templates/ap-matching.txt"),
            TemplateId::SyntaxCorrection => include_str!("../../templates/syntax-correction.txt"),
            TemplateId::CriticAnalysis => include_str!("../../templates/critic-analysis.txt"),
            TemplateId::LtlRevision => include_str!("../../templates/ltl-revision.txt"),
        }
    }

    /// Placeholder names in order of first occurrence.
    pub fn placeholders(self) -> Vec<&'static str> {
        let mut names = Vec::new();
        for (_, name, _) in scan(self.text()) {
            if !names.contains(&name) {
                names.push(name);
            }
        }
        names
    }

    /// Substitutes every placeholder in a single pass, so bound values may
    /// themselves contain braces.
    pub fn render(self, bindings: &BTreeMap<String, String>) -> Result<String, AgentError> {
        let text = self.text();
        let mut out = String::with_capacity(text.len());
        let mut last = 0;
        for (start, name, end) in scan(text) {
            let value = bindings
                .get(name)
                .ok_or_else(|| AgentError::UnboundPlaceholder {
                    template: self,
                    name: name.to_string(),
                })?;
            out.push_str(&text[last..start]);
            out.push_str(value);
            last = end;
        }
        out.push_str(&text[last..]);
        Ok(out)
    }
}

/// `(start, name, end)` of every `{identifier}` occurrence.
fn scan(text: &str) -> Vec<(usize, &str, usize)> {
    let mut found = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'{' {
            let mut j = i + 1;
            while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                j += 1;
            }
            if j > i + 1 && j < bytes.len() && bytes[j] == b'}' {
                found.push((i, &text[i + 1..j], j + 1));
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    found
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TemplateId {
    type Err = AgentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TemplateId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| AgentError::UnknownTemplate(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placeholder_sets() {
        assert_eq!(TemplateId::NlToLtl.placeholders(), ["nl"]);
        assert_eq!(TemplateId::LtlToNl.placeholders(), ["ltl"]);
        assert_eq!(
            TemplateId::ApMatching.placeholders(),
            ["LTL", "atomic_proposition_library"]
        );
        assert_eq!(
            TemplateId::SyntaxCorrection.placeholders(),
            ["syntactic_check_output", "ltl_formula"]
        );
        assert_eq!(
            TemplateId::CriticAnalysis.placeholders(),
            [
                "LTL",
                "input_BA",
                "comparison_BA",
                "checking_output",
                "comparison_LTL"
            ]
        );
        assert_eq!(
            TemplateId::LtlRevision.placeholders(),
            ["LTL", "understanding_output"]
        );
    }

    #[test]
    fn rendering_is_total() {
        for t in TemplateId::ALL {
            let bindings: BTreeMap<String, String> = t
                .placeholders()
                .into_iter()
                .map(|p| (p.to_string(), "{x} value".to_string()))
                .collect();
            let out = t.render(&bindings).unwrap();
            for p in t.placeholders() {
                assert!(!out.contains(&format!("{{{p}}}")), "{t} keeps {{{p}}}");
            }
            assert!(out.contains("{x} value"));
        }
    }

    #[test]
    fn unbound_placeholder() {
        let err = TemplateId::LtlToNl.render(&BTreeMap::new()).unwrap_err();
        assert!(matches!(err, AgentError::UnboundPlaceholder { .. }));
    }

    #[test]
    fn ids_round_trip() {
        for t in TemplateId::ALL {
            assert_eq!(t.as_str().parse::<TemplateId>().unwrap(), t);
        }
        assert!("extract-step1".parse::<TemplateId>().is_err());
    }
}
