use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticGuidance {
    pub counterexample_analysis: String,
    pub proposed_adjustments: String,
    pub general_guidance: String,
}

const HEADERS: [&str; 3] = [
    "counterexample_analysis",
    "proposed_adjustments",
    "general_guidance",
];

/// Which section header, if any, opens `line`, and the text after it.
fn header(line: &str) -> Option<(usize, &str)> {
    let start = line.find(|c: char| c.is_ascii_alphabetic())?;
    let rest = &line[start..];
    for (k, h) in HEADERS.iter().enumerate() {
        if rest.len() < h.len() || !rest.is_char_boundary(h.len()) {
            continue;
        }
        let head = rest[..h.len()].to_lowercase().replace(' ', "_");
        if head == *h {
            let tail = rest[h.len()..].trim_start_matches(|c: char| {
                matches!(c, '*' | ':' | '#' | '"' | '\'') || c.is_whitespace()
            });
            return Some((k, tail));
        }
    }
    None
}

impl CriticGuidance {
    /// Splits a critic reply into its three sections, in any order.
    /// Returns the names of the missing sections on failure.
    pub fn parse(text: &str) -> Result<Self, Vec<&'static str>> {
        let mut sections: [Option<Vec<&str>>; 3] = [None, None, None];
        let mut current: Option<usize> = None;
        for line in text.lines() {
            if let Some((k, tail)) = header(line) {
                let body = sections[k].get_or_insert_with(Vec::new);
                if !tail.is_empty() {
                    body.push(tail);
                }
                current = Some(k);
            } else if let Some(k) = current {
                sections[k].as_mut().expect("opened").push(line);
            }
        }
        let bodies: Vec<Option<String>> = sections
            .into_iter()
            .map(|s| {
                s.map(|lines| lines.join("\n").trim().to_string())
                    .filter(|b| !b.is_empty())
            })
            .collect();
        let missing: Vec<&'static str> = HEADERS
            .iter()
            .zip(&bodies)
            .filter(|(_, b)| b.is_none())
            .map(|(h, _)| *h)
            .collect();
        if !missing.is_empty() {
            return Err(missing);
        }
        let mut it = bodies.into_iter().map(Option::unwrap);
        Ok(CriticGuidance {
            counterexample_analysis: it.next().unwrap(),
            proposed_adjustments: it.next().unwrap(),
            general_guidance: it.next().unwrap(),
        })
    }

    pub fn render(&self) -> String {
        format!(
            "1. Counterexample_Analysis: {}\n2. Proposed_Adjustments: {}\n3. General_Guidance: {}",
            self.counterexample_analysis, self.proposed_adjustments, self.general_guidance
        )
    }
}
