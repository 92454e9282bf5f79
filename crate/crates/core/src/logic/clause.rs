//! Horn clauses and body literals.

use std::fmt;

use super::term::Term;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "=<",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=:=",
            CmpOp::Ne => "=\\=",
        }
    }
}

/// Integer expression: a term (variable or integer) combined with `+`/`-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Term(Term),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Term(Term::var(name))
    }

    pub fn int(n: i64) -> Expr {
        Expr::Term(Term::Int(n))
    }

    pub fn plus(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn minus(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl From<Term> for Expr {
    fn from(t: Term) -> Self {
        Expr::Term(t)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<&str> for Expr {
    fn from(v: &str) -> Self {
        Expr::var(v)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Add(a, b) => write!(f, "{a}+{b}"),
            Expr::Sub(a, b) => match **b {
                Expr::Term(_) => write!(f, "{a}-{b}"),
                _ => write!(f, "{a}-({b})"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Literal {
    Pos(Term),
    /// Negation as failure; the term must be ground when reached.
    Not(Term),
    /// `lhs is expr`
    Is(Term, Expr),
    Cmp(CmpOp, Expr, Expr),
}

impl Literal {
    pub fn is(lhs: impl Into<String>, expr: impl Into<Expr>) -> Literal {
        Literal::Is(Term::var(lhs), expr.into())
    }
}

impl From<Term> for Literal {
    fn from(t: Term) -> Self {
        Literal::Pos(t)
    }
}

/// `not(t)` as a body literal.
pub fn not(t: Term) -> Literal {
    Literal::Not(t)
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(t) => write!(f, "{t}"),
            Literal::Not(t) => write!(f, "not {t}"),
            Literal::Is(l, e) => write!(f, "{l} is {e}"),
            Literal::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Term,
    pub body: Vec<Literal>,
}

impl Clause {
    pub fn fact(head: Term) -> Clause {
        Clause { head, body: Vec::new() }
    }

    pub fn rule(head: Term, body: Vec<Literal>) -> Clause {
        Clause { head, body }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && self.head.is_ground()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        for (i, lit) in self.body.iter().enumerate() {
            f.write_str(if i == 0 { " :- " } else { ", " })?;
            write!(f, "{lit}")?;
        }
        f.write_str(".")
    }
}
