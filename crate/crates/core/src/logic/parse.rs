//! Textual clause syntax, one clause per line:
//!
//! ```text
//! free(X,Y) :- square(X,Y), not occupied(X,Y).
//! next(X,Y) :- free(A,Y), X is A + 1, X < 8.
//! ```
//!
//! Identifiers starting with an uppercase letter or `_` are variables.
//! `%` starts a comment.

use std::iter::Peekable;
use std::str::Chars;

use thiserror::Error;

use super::clause::{Clause, CmpOp, Expr, Literal};
use super::term::Term;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Punct(&'static str),
}

const PUNCTS: [&str; 14] = [
    ":-", "=:=", "=\\=", "=<", ">=", "\\+", "(", ")", ",", ".", "+", "-", "<", ">",
];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut it: Peekable<Chars> = src.chars().peekable();
    while let Some(&c) = it.peek() {
        if c == '\n' {
            line += 1;
            it.next();
        } else if c.is_whitespace() {
            it.next();
        } else if c == '%' {
            while it.peek().is_some_and(|&c| c != '\n') {
                it.next();
            }
        } else if c.is_ascii_digit() {
            let mut n = String::new();
            while let Some(&d) = it.peek().filter(|d| d.is_ascii_digit()) {
                n.push(d);
                it.next();
            }
            let v = n.parse().map_err(|_| ParseError {
                line,
                message: format!("integer `{n}` out of range"),
            })?;
            out.push((Tok::Int(v), line));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = it.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                it.next();
            }
            out.push((Tok::Ident(s), line));
        } else {
            let rest: String = it.clone().take(3).collect();
            let Some(p) = PUNCTS.iter().find(|p| rest.starts_with(**p)) else {
                return Err(ParseError {
                    line,
                    message: format!("unexpected character `{c}`"),
                });
            };
            for _ in 0..p.len() {
                it.next();
            }
            out.push((Tok::Punct(p), line));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase() || c == '_')
}

impl Parser {
    fn line(&self) -> usize {
        self.toks.get(self.pos).or(self.toks.last()).map_or(1, |t| t.1)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.line(),
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.0.clone());
        self.pos += 1;
        t
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Punct(q)) if *q == p) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.describe()))
        }
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(Tok::Ident(s)) => format!("`{s}`"),
            Some(Tok::Int(n)) => format!("`{n}`"),
            Some(Tok::Punct(p)) => format!("`{p}`"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Term::Int(n)),
            Some(Tok::Punct("-")) => match self.bump() {
                Some(Tok::Int(n)) => Ok(Term::Int(-n)),
                _ => {
                    self.pos -= 1;
                    self.err(format!("expected integer after `-`, found {}", self.describe()))
                }
            },
            Some(Tok::Ident(s)) if is_var_name(&s) => Ok(Term::Var(s)),
            Some(Tok::Ident(s)) => {
                if !self.eat("(") {
                    return Ok(Term::Sym(s));
                }
                let mut args = vec![self.term()?];
                while self.eat(",") {
                    args.push(self.term()?);
                }
                self.expect(")")?;
                Ok(Term::Compound(s, args))
            }
            _ => {
                self.pos -= 1;
                self.err(format!("expected a term, found {}", self.describe()))
            }
        }
    }

    fn expr_tail(&mut self, mut lhs: Expr) -> Result<Expr, ParseError> {
        loop {
            if self.eat("+") {
                lhs = lhs.plus(Expr::Term(self.term()?));
            } else if self.eat("-") {
                lhs = lhs.minus(Expr::Term(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let first = Expr::Term(self.term()?);
        self.expr_tail(first)
    }

    fn cmp_op(&mut self) -> Option<CmpOp> {
        let op = match self.peek()? {
            Tok::Punct("<") => CmpOp::Lt,
            Tok::Punct("=<") => CmpOp::Le,
            Tok::Punct(">") => CmpOp::Gt,
            Tok::Punct(">=") => CmpOp::Ge,
            Tok::Punct("=:=") => CmpOp::Eq,
            Tok::Punct("=\\=") => CmpOp::Ne,
            _ => return None,
        };
        self.pos += 1;
        Some(op)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.eat("\\+")
            || (self.peek() == Some(&Tok::Ident("not".into()))
                && !matches!(self.peek_at(1), Some(Tok::Punct("," | "." | ")")) | None)
                && {
                    self.pos += 1;
                    true
                });
        if negated {
            let t = if self.eat("(") {
                let t = self.term()?;
                self.expect(")")?;
                t
            } else {
                self.term()?
            };
            return match t {
                Term::Compound(..) | Term::Sym(_) => Ok(Literal::Not(t)),
                _ => self.err(format!("cannot negate `{t}`")),
            };
        }
        let t = self.term()?;
        if self.peek() == Some(&Tok::Ident("is".into())) {
            self.pos += 1;
            return Ok(Literal::Is(t, self.expr()?));
        }
        let lhs = self.expr_tail(Expr::Term(t.clone()))?;
        if let Some(op) = self.cmp_op() {
            return Ok(Literal::Cmp(op, lhs, self.expr()?));
        }
        match (&lhs, t) {
            (Expr::Term(_), t @ (Term::Compound(..) | Term::Sym(_))) => Ok(Literal::Pos(t)),
            (_, t) => self.err(format!("`{t}` is not a goal")),
        }
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        let head = self.term()?;
        if !matches!(head, Term::Compound(..) | Term::Sym(_)) {
            return self.err(format!("clause head `{head}` must be compound"));
        }
        let mut body = Vec::new();
        if self.eat(":-") {
            body.push(self.literal()?);
            while self.eat(",") {
                body.push(self.literal()?);
            }
        }
        self.expect(".")?;
        Ok(Clause { head, body })
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => self.err(format!("unexpected {}", self.describe())),
        }
    }
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        toks: lex(src)?,
        pos: 0,
    })
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut p = parser(src)?;
    let t = p.term()?;
    p.done()?;
    Ok(t)
}

pub fn parse_literal(src: &str) -> Result<Literal, ParseError> {
    let mut p = parser(src)?;
    let l = p.literal()?;
    p.done()?;
    Ok(l)
}

pub fn parse_clause(src: &str) -> Result<Clause, ParseError> {
    let mut p = parser(src)?;
    let c = p.clause()?;
    p.done()?;
    Ok(c)
}

pub fn parse_program(src: &str) -> Result<Vec<Clause>, ParseError> {
    let mut p = parser(src)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.clause()?);
    }
    Ok(out)
}
