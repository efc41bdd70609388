use serde::{Deserialize, Serialize};

use super::syntax::{DiagnosticKind, SyntaxDiagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Atom,
    Operator,
    LeftParen,
    RightParen,
    Constant,
}

/// A lexeme with its zero-based character offset in the source text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub position: usize,
}

impl Token {
    pub fn is_unary(&self) -> bool {
        self.kind == TokenKind::Operator && matches!(self.lexeme.as_str(), "!" | "X" | "F" | "G")
    }

    pub fn is_binary(&self) -> bool {
        self.kind == TokenKind::Operator && !self.is_unary()
    }
}

const KEYWORD_OPERATORS: [&str; 4] = ["X", "F", "G", "U"];

/// Splits `text` into tokens. Every unknown character run becomes an
/// `unknown-token` diagnostic; all-whitespace input is `empty-formula`.
pub fn tokenize(text: &str) -> Result<Vec<Token>, Vec<SyntaxDiagnostic>> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut errors = Vec::new();
    let mut i = 0;
    // start of the current run of unrecognised characters
    let mut unknown_start: Option<usize> = None;

    let flush_unknown =
        |start: &mut Option<usize>, end: usize, errors: &mut Vec<SyntaxDiagnostic>| {
            if let Some(s) = start.take() {
                let lexeme: String = chars[s..end].iter().collect();
                errors.push(SyntaxDiagnostic::new(
                    DiagnosticKind::UnknownToken,
                    s,
                    format!("unknown token '{lexeme}'"),
                ));
            }
        };

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            flush_unknown(&mut unknown_start, i, &mut errors);
            i += 1;
            continue;
        }
        let (kind, len) = if c.is_ascii_alphanumeric() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            let word: String = chars[i..i + len].iter().collect();
            let kind = if KEYWORD_OPERATORS.contains(&word.as_str()) {
                Some(TokenKind::Operator)
            } else if matches!(word.as_str(), "true" | "false" | "1" | "0") {
                Some(TokenKind::Constant)
            } else if c.is_ascii_digit() {
                None
            } else {
                Some(TokenKind::Atom)
            };
            (kind, len)
        } else {
            match c {
                '(' => (Some(TokenKind::LeftParen), 1),
                ')' => (Some(TokenKind::RightParen), 1),
                '!' | '&' | '|' => (Some(TokenKind::Operator), 1),
                '-' if chars.get(i + 1) == Some(&'>') => (Some(TokenKind::Operator), 2),
                '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                    (Some(TokenKind::Operator), 3)
                }
                _ => (None, 1),
            }
        };
        match kind {
            Some(kind) => {
                flush_unknown(&mut unknown_start, i, &mut errors);
                tokens.push(Token {
                    kind,
                    lexeme: chars[i..i + len].iter().collect(),
                    position: i,
                });
            }
            None => {
                unknown_start.get_or_insert(i);
            }
        }
        i += len;
    }
    flush_unknown(&mut unknown_start, chars.len(), &mut errors);

    if !errors.is_empty() {
        return Err(errors);
    }
    if tokens.is_empty() {
        return Err(vec![SyntaxDiagnostic::new(
            DiagnosticKind::EmptyFormula,
            0,
            "formula is empty".to_string(),
        )]);
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(text: &str) -> Vec<(TokenKind, String, usize)> {
        tokenize(text)
            .unwrap()
            .into_iter()
            .map(|t| (t.kind, t.lexeme, t.position))
            .collect()
    }

    #[test]
    fn simple_streams() {
        use TokenKind::*;
        assert_eq!(
            summary("G a"),
            vec![(Operator, "G".into(), 0), (Atom, "a".into(), 2)]
        );
        assert_eq!(
            summary("a U b"),
            vec![
                (Atom, "a".into(), 0),
                (Operator, "U".into(), 2),
                (Atom, "b".into(), 4)
            ]
        );
        assert_eq!(
            summary("!(p->q)<->1"),
            vec![
                (Operator, "!".into(), 0),
                (LeftParen, "(".into(), 1),
                (Atom, "p".into(), 2),
                (Operator, "->".into(), 3),
                (Atom, "q".into(), 5),
                (RightParen, ")".into(), 6),
                (Operator, "<->".into(), 7),
                (Constant, "1".into(), 10)
            ]
        );
    }

    #[test]
    fn keyword_prefixes_are_atoms() {
        let toks = tokenize("Fa Gx_1 Until").unwrap();
        assert!(toks.iter().all(|t| t.kind == TokenKind::Atom));
    }

    #[test]
    fn unknown_characters() {
        let errs = tokenize("a $ b").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].kind, DiagnosticKind::UnknownToken);
        assert_eq!(errs[0].position, 2);

        let errs = tokenize("a; b - c").unwrap_err();
        assert_eq!(
            errs.iter().map(|e| e.position).collect::<Vec<_>>(),
            vec![1, 5]
        );
        assert_eq!(tokenize("12ab").unwrap_err()[0].position, 0);
    }

    #[test]
    fn empty_input() {
        for text in ["", "   \n\t"] {
            let errs = tokenize(text).unwrap_err();
            assert_eq!(errs[0].kind, DiagnosticKind::EmptyFormula);
        }
    }

    #[test]
    fn positions_count_characters_not_bytes() {
        let errs = tokenize("é & a").unwrap_err();
        assert_eq!(errs[0].position, 0);
        let toks = tokenize("a & (b)").unwrap();
        assert_eq!(toks.last().unwrap().position, 6);
    }
}
