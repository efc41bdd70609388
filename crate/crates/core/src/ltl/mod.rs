//! LTL syntax: tokens, operator checking, parsing, rendering, normal forms
//! and exact evaluation over lasso words.
//!
//! Surface grammar, loosest to tightest: `<->`, `->` (right-assoc), `|`,
//! `&`, `U` (right-assoc), then the prefix operators `! X F G`. Constants are
//! `true`/`1` and `false`/`0`.

mod formula;
mod lexer;
mod parser;
mod render;
mod syntax;
mod word;

pub use formula::{is_identifier, Formula};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;
pub use render::render;
pub use syntax::{
    check_operators, check_text, render_diagnostics, DiagnosticKind, SyntaxDiagnostic,
};
pub use word::{bounded_lassos, eval_lasso, LassoWord, Symbol};
