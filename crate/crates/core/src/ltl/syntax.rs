use std::fmt;

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagnosticKind {
    UnbalancedParen,
    MissingOperand,
    /// Two operands (or an operand and a group) with no binary operator
    /// between them, e.g. `a b`.
    MissingOperator,
    DanglingOperator,
    UnknownToken,
    EmptyFormula,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::UnbalancedParen => "unbalanced-paren",
            DiagnosticKind::MissingOperand => "missing-operand",
            DiagnosticKind::MissingOperator => "missing-operator",
            DiagnosticKind::DanglingOperator => "dangling-operator",
            DiagnosticKind::UnknownToken => "unknown-token",
            DiagnosticKind::EmptyFormula => "empty-formula",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntaxDiagnostic {
    pub kind: DiagnosticKind,
    /// Zero-based character offset into the checked text.
    pub position: usize,
    pub message: String,
}

impl SyntaxDiagnostic {
    pub fn new(kind: DiagnosticKind, position: usize, message: String) -> Self {
        SyntaxDiagnostic {
            kind,
            position,
            message,
        }
    }
}

impl fmt::Display for SyntaxDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at position {}: {}",
            self.kind, self.position, self.message
        )
    }
}

/// Renders a diagnostic list one per line, the form handed to the
/// syntax-correction prompt.
pub fn render_diagnostics(diagnostics: &[SyntaxDiagnostic]) -> String {
    diagnostics
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Operator matching over a token stream.
///
/// Scans left to right with a parenthesis stack and an operand/operator
/// expectation, reporting every independent problem rather than stopping at
/// the first. The result is empty exactly when the stream parses.
pub fn check_operators(tokens: &[Token]) -> Vec<SyntaxDiagnostic> {
    use DiagnosticKind::*;

    let mut out = Vec::new();
    if tokens.is_empty() {
        out.push(SyntaxDiagnostic::new(
            EmptyFormula,
            0,
            "formula is empty".into(),
        ));
        return out;
    }

    let mut open: Vec<usize> = Vec::new();
    let mut expect_operand = true;
    // last token that changed the expectation state
    let mut last: Option<&Token> = None;

    for tok in tokens {
        match tok.kind {
            TokenKind::Atom | TokenKind::Constant => {
                if !expect_operand {
                    out.push(SyntaxDiagnostic::new(
                        MissingOperator,
                        tok.position,
                        format!("expected a binary operator before '{}'", tok.lexeme),
                    ));
                }
                expect_operand = false;
            }
            TokenKind::Operator if tok.is_unary() => {
                if !expect_operand {
                    out.push(SyntaxDiagnostic::new(
                        MissingOperator,
                        tok.position,
                        format!("expected a binary operator before '{}'", tok.lexeme),
                    ));
                }
                expect_operand = true;
            }
            TokenKind::Operator => {
                if expect_operand {
                    out.push(SyntaxDiagnostic::new(
                        MissingOperand,
                        tok.position,
                        format!("operator '{}' has no left operand", tok.lexeme),
                    ));
                }
                expect_operand = true;
            }
            TokenKind::LeftParen => {
                if !expect_operand {
                    out.push(SyntaxDiagnostic::new(
                        MissingOperator,
                        tok.position,
                        "expected a binary operator before '('".into(),
                    ));
                }
                open.push(tok.position);
                expect_operand = true;
            }
            TokenKind::RightParen => {
                if open.pop().is_none() {
                    out.push(SyntaxDiagnostic::new(
                        UnbalancedParen,
                        tok.position,
                        "')' has no matching '('".into(),
                    ));
                    continue;
                }
                if expect_operand {
                    match last {
                        Some(prev) if prev.kind == TokenKind::Operator => {
                            out.push(SyntaxDiagnostic::new(
                                DanglingOperator,
                                prev.position,
                                format!("operator '{}' has no right operand", prev.lexeme),
                            ));
                        }
                        _ => out.push(SyntaxDiagnostic::new(
                            MissingOperand,
                            tok.position,
                            "empty parentheses".into(),
                        )),
                    }
                }
                expect_operand = false;
            }
        }
        last = Some(tok);
    }

    if expect_operand {
        if let Some(prev) = last {
            if prev.kind == TokenKind::Operator {
                out.push(SyntaxDiagnostic::new(
                    DanglingOperator,
                    prev.position,
                    format!("operator '{}' has no right operand", prev.lexeme),
                ));
            }
        }
    }
    for pos in open {
        out.push(SyntaxDiagnostic::new(
            UnbalancedParen,
            pos,
            "'(' is never closed".into(),
        ));
    }
    out.sort_by_key(|d| d.position);
    out
}

/// Tokenizes and checks `text` in one step.
pub fn check_text(text: &str) -> Vec<SyntaxDiagnostic> {
    match super::lexer::tokenize(text) {
        Ok(tokens) => check_operators(&tokens),
        Err(diags) => diags,
    }
}
