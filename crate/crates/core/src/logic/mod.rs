//! Horn-clause reasoning for declarative guards.

pub mod builder;
pub mod clause;
pub mod kb;
pub mod parse;
pub mod term;

pub use clause::{not, Clause, CmpOp, Expr, Literal};
pub use kb::{KbError, KnowledgeBase, QueryError, DEFAULT_MAX_DEPTH};
pub use parse::{parse_clause, parse_literal, parse_program, parse_term, ParseError};
pub use term::{unify, Bindings, Term};
