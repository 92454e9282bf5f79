//! Fluent clause construction:
//!
//! ```
//! use bdi_tactics::logic::builder::{clause, pred};
//! use bdi_tactics::logic::not;
//!
//! let rule = clause(pred("winningMove", ["X", "Y"]))
//!     .imp_by(pred("eastNeighbor", ["cross", "A", "B", "Y"]))
//!     .and(not(pred("occupied", ["A", "Y"])))
//!     .and("X is A")
//!     .build()
//!     .unwrap();
//! assert_eq!(
//!     rule.to_string(),
//!     "winningMove(X,Y) :- eastNeighbor(cross,A,B,Y), not occupied(A,Y), X is A."
//! );
//! ```

use super::clause::{Clause, Literal};
use super::parse::{parse_literal, ParseError};
use super::term::Term;

/// `pred("p", ["X", "a"])` is `p(X,a)`.
pub fn pred<T: Into<Term>>(functor: &str, args: impl IntoIterator<Item = T>) -> Term {
    Term::app(functor, args.into_iter().map(Into::into).collect())
}

pub trait IntoLiteral {
    fn into_literal(self) -> Result<Literal, ParseError>;
}

impl IntoLiteral for Literal {
    fn into_literal(self) -> Result<Literal, ParseError> {
        Ok(self)
    }
}

impl IntoLiteral for Term {
    fn into_literal(self) -> Result<Literal, ParseError> {
        Ok(Literal::Pos(self))
    }
}

/// Parsed with the textual literal syntax, e.g. `"X is A + 1"`.
impl IntoLiteral for &str {
    fn into_literal(self) -> Result<Literal, ParseError> {
        parse_literal(self)
    }
}

#[derive(Debug, Clone)]
pub struct ClauseBuilder {
    head: Term,
    body: Vec<Literal>,
    error: Option<ParseError>,
}

pub fn clause(head: Term) -> ClauseBuilder {
    ClauseBuilder {
        head,
        body: Vec::new(),
        error: None,
    }
}

impl ClauseBuilder {
    pub fn imp_by(self, lit: impl IntoLiteral) -> Self {
        self.and(lit)
    }

    pub fn and(mut self, lit: impl IntoLiteral) -> Self {
        match lit.into_literal() {
            Ok(l) => self.body.push(l),
            Err(e) => {
                self.error.get_or_insert(e);
            }
        }
        self
    }

    pub fn build(self) -> Result<Clause, ParseError> {
        match self.error {
            Some(e) => Err(e),
            None => Ok(Clause::rule(self.head, self.body)),
        }
    }
}
