//! Terms, substitutions and syntactic unification.

use std::collections::BTreeMap;
use std::fmt;

use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Sym(String),
    Int(i64),
    Compound(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        let name = name.into();
        assert!(!name.is_empty(), "variable names are nonempty");
        Term::Var(name)
    }

    pub fn sym(name: impl Into<String>) -> Term {
        Term::Sym(name.into())
    }

    pub fn int(n: i64) -> Term {
        Term::Int(n)
    }

    pub fn app(functor: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Compound(functor.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Sym(_) | Term::Int(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Term::Int(n) => Some(*n),
            _ => None,
        }
    }

    /// Functor and arity of a compound (or a bare symbol, read as arity 0).
    pub fn signature(&self) -> Option<(&str, usize)> {
        match self {
            Term::Compound(f, args) => Some((f, args.len())),
            Term::Sym(s) => Some((s, 0)),
            _ => None,
        }
    }

    /// Variable names in first-occurrence order.
    pub fn vars(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Term::Int(n) => Value::Int(*n),
            Term::Sym(s) | Term::Var(s) => Value::Text(s.clone()),
            Term::Compound(f, args) => {
                let mut items = vec![Value::Text(f.clone())];
                items.extend(args.iter().map(Term::to_value));
                Value::List(items)
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Sym(v) => f.write_str(v),
            Term::Int(n) => write!(f, "{n}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// `"A"` is a variable, `"cross"` a symbol.
impl From<&str> for Term {
    fn from(s: &str) -> Self {
        if s.starts_with(|c: char| c.is_uppercase() || c == '_') {
            Term::var(s)
        } else {
            Term::sym(s)
        }
    }
}

impl From<i64> for Term {
    fn from(n: i64) -> Self {
        Term::Int(n)
    }
}

/// A substitution keyed by variable name. Bindings produced by `unify` are
/// triangular (a value may mention other bound variables); query answers
/// are fully resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    map: BTreeMap<String, Term>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    /// Integer value of `var` after resolution.
    pub fn int(&self, var: &str) -> Option<i64> {
        self.resolve(&Term::Var(var.to_string())).as_int()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Term)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub(crate) fn insert(&mut self, var: String, value: Term) {
        self.map.insert(var, value);
    }

    fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.map.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Apply the substitution exhaustively.
    pub fn resolve(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Compound(f, args) => Term::Compound(f.clone(), args.iter().map(|a| self.resolve(a)).collect()),
            other => other.clone(),
        }
    }

    /// The same substitution in idempotent form.
    pub fn resolved(&self) -> Bindings {
        Bindings {
            map: self
                .map
                .keys()
                .map(|k| (k.clone(), self.resolve(&Term::Var(k.clone()))))
                .collect(),
        }
    }

    /// `{"X": 3, ...}`, unresolved variables as their names.
    pub fn to_value(&self) -> Value {
        Value::map(
            self.map
                .keys()
                .map(|k| (k.clone(), self.resolve(&Term::Var(k.clone())).to_value())),
        )
    }

    fn occurs(&self, var: &str, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(v) => v == var,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(var, a)),
            _ => false,
        }
    }

    fn unify_in(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if self.occurs(x, other) {
                    return false;
                }
                self.map.insert(x.clone(), other.clone());
                true
            }
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_in(x, y))
            }
            _ => a == b,
        }
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of `a` and `b` extending `bindings`, with occurs
/// check.
pub fn unify(a: &Term, b: &Term, bindings: &Bindings) -> Option<Bindings> {
    let mut out = bindings.clone();
    out.unify_in(a, b).then_some(out)
}
