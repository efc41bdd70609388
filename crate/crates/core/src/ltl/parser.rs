use std::str::FromStr;

use super::formula::Formula;
use super::lexer::{tokenize, Token, TokenKind};
use super::syntax::{check_operators, SyntaxDiagnostic};

/// Binding strength of binary operators; higher binds tighter.
pub(crate) fn binary_precedence(op: &str) -> (u8, bool) {
    // (precedence, right-associative)
    match op {
        "<->" => (1, false),
        "->" => (2, true),
        "|" => (3, false),
        "&" => (4, false),
        "U" => (5, true),
        _ => unreachable!("not a binary operator: {op}"),
    }
}

/// Parses LTL text. On failure returns exactly the diagnostics that
/// [`check_operators`] (or the tokenizer) produce for the same text.
pub fn parse(text: &str) -> Result<Formula, Vec<SyntaxDiagnostic>> {
    let tokens = tokenize(text)?;
    let diagnostics = check_operators(&tokens);
    if !diagnostics.is_empty() {
        return Err(diagnostics);
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
    };
    let f = parser.expression(1);
    debug_assert_eq!(parser.pos, tokens.len());
    Ok(f)
}

impl FromStr for Formula {
    type Err = Vec<SyntaxDiagnostic>;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// Precedence climbing over a token stream already accepted by
/// `check_operators`.
struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn expression(&mut self, min_prec: u8) -> Formula {
        let mut lhs = self.unary();
        while let Some(tok) = self.peek() {
            if !tok.is_binary() {
                break;
            }
            let (prec, right_assoc) = binary_precedence(&tok.lexeme);
            if prec < min_prec {
                break;
            }
            let op = self.bump().lexeme.clone();
            let rhs = self.expression(if right_assoc { prec } else { prec + 1 });
            lhs = match op.as_str() {
                "<->" => Formula::iff(lhs, rhs),
                "->" => Formula::implies(lhs, rhs),
                "|" => Formula::or(lhs, rhs),
                "&" => Formula::and(lhs, rhs),
                "U" => Formula::until(lhs, rhs),
                _ => unreachable!(),
            };
        }
        lhs
    }

    fn unary(&mut self) -> Formula {
        let tok = self.bump().clone();
        match tok.kind {
            TokenKind::Operator => {
                let inner = self.unary();
                match tok.lexeme.as_str() {
                    "!" => Formula::not(inner),
                    "X" => Formula::next(inner),
                    "F" => Formula::eventually(inner),
                    "G" => Formula::globally(inner),
                    other => unreachable!("binary operator {other} in operand position"),
                }
            }
            TokenKind::LeftParen => {
                let inner = self.expression(1);
                let close = self.bump();
                debug_assert_eq!(close.kind, TokenKind::RightParen);
                inner
            }
            TokenKind::Constant => match tok.lexeme.as_str() {
                "true" | "1" => Formula::True,
                _ => Formula::False,
            },
            TokenKind::Atom => Formula::Atom(tok.lexeme),
            TokenKind::RightParen => unreachable!("')' in operand position"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }
    fn a(n: &str) -> Formula {
        Formula::atom(n)
    }

    #[test]
    fn negation() {
        assert_eq!(p("!a"), Formula::not(a("a")));
    }

    #[test]
    fn until_binds_tighter_than_and() {
        assert_eq!(
            p("a U b & c"),
            Formula::and(Formula::until(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            p("a U b U c"),
            Formula::until(a("a"), Formula::until(a("b"), a("c")))
        );
    }

    #[test]
    fn precedence_ladder() {
        assert_eq!(
            p("a | b & c -> d <-> e"),
            Formula::iff(
                Formula::implies(Formula::or(a("a"), Formula::and(a("b"), a("c"))), a("d")),
                a("e")
            )
        );
        assert_eq!(
            p("a & b & c"),
            Formula::and(Formula::and(a("a"), a("b")), a("c"))
        );
        assert_eq!(
            p("G F !a"),
            Formula::globally(Formula::eventually(Formula::not(a("a"))))
        );
        assert_eq!(p("!a U b"), Formula::until(Formula::not(a("a")), a("b")));
        assert_eq!(
            p("1 & 0 | true"),
            Formula::or(Formula::and(Formula::True, Formula::False), Formula::True)
        );
    }

    #[test]
    fn base_rule_chain_is_right_associative() {
        let f = p(
            "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) \
                   -> G(straight_1km & arrive_destination)",
        );
        let Formula::Implies(lhs, rhs) = f else {
            panic!("top level should be an implication")
        };
        assert_eq!(
            *rhs,
            Formula::globally(Formula::and(a("straight_1km"), a("arrive_destination")))
        );
        let Formula::Globally(inner) = *lhs else {
            panic!()
        };
        let Formula::Implies(_, chain) = *inner else {
            panic!()
        };
        assert_eq!(
            *chain,
            Formula::implies(
                a("right_turn"),
                Formula::implies(a("straight_500m"), a("left_turn"))
            )
        );
    }

    #[test]
    fn failure_matches_checker() {
        let text = "G (a -> F b";
        let tokens = tokenize(text).unwrap();
        assert_eq!(parse(text).unwrap_err(), check_operators(&tokens));
    }
}
