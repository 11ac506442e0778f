//! The pGCL language: state spaces, expressions, programs and the parser.

pub mod expr;
pub mod lexer;
pub mod parser;
pub mod program;
pub mod space;

use thiserror::Error;

pub use expr::{BinOp, EvalError, Expr, VarRef};
pub use parser::{parse, parse_expr, parse_source, parse_with, Params, Source};
pub use program::{DistExpr, Program, VariantSpec};
pub use space::{State, StateSpace, Value, VarDomain, MAX_STATES};

/// A located parse diagnostic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("syntax error at {0}")]
    Syntax(ParseError),
    #[error("undeclared variable `{name}` at {line}:{col}")]
    Undeclared { name: String, line: usize, col: usize },
    #[error("malformed literal at {0}")]
    MalformedLiteral(ParseError),
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("value `{value}` is not allowed in the domain of `{var}`")]
    BadDomainValue { var: String, value: String },
    #[error("value `{value}` appears twice in the domain of `{var}`")]
    DuplicateDomainValue { var: String, value: String },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` has the same name as a token value")]
    VariableShadowsToken(String),
    #[error("state space exceeds {0} states")]
    SpaceTooLarge(usize),
}
