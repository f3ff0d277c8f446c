//! Parsing the toy language and lowering it to a control-flow automaton.

mod ast;
mod cfa;
mod dot;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{BinOp, CmpOp, Expr, Pred, Program, Stmt, Var};
pub use cfa::{build_cfa, CfaError, ControlFlowAutomaton, Edge, Loc, Operation};
pub use dot::cfa_to_dot;
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("use of undeclared variable `{0}`")]
    UndeclaredVariable(String),
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
}

/// Parses and lowers in one step.
pub fn parse_cfa(source: &str) -> Result<ControlFlowAutomaton, ParseError> {
    parse(source).map(|program| build_cfa(&program))
}
