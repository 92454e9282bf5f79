//! Knowledge base and the resolution engine.
//!
//! Clauses are compiled into a compact form where variables are numbered
//! per clause. At resolution time a clause is activated by reserving a frame
//! of binding slots, so nothing is copied (structure sharing). Each
//! predicate keeps a per-argument index from constants to the ordered list
//! of clauses whose head could match, so clause order is preserved.

use std::collections::HashMap;
use std::rc::Rc;

use thiserror::Error;

use super::clause::{Clause, CmpOp, Expr, Literal};
use super::term::{Bindings, Term};

pub const DEFAULT_MAX_DEPTH: usize = 10_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KbError {
    #[error("fact `{0}` is not ground")]
    NonGroundFact(String),
    #[error("clause head `{0}` is not a compound term")]
    BadHead(String),
    #[error("literal `{0}` is not callable")]
    NotCallable(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("goal `{0}` is not callable")]
    NotCallable(String),
    #[error("negated literal `{0}` is not ground")]
    NonGroundNegation(String),
    #[error("arithmetic on unbound variable in `{0}`")]
    NonGroundArithmetic(String),
    #[error("`{0}` is not an integer")]
    NotAnInteger(String),
    #[error("derivation deeper than {0} steps")]
    DepthExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Const {
    Sym(Rc<str>),
    Int(i64),
}

#[derive(Clone, Debug)]
enum CT {
    Var(u32),
    Con(Const),
    App(Rc<str>, Rc<[CT]>),
}

#[derive(Debug, Clone)]
enum CExpr {
    T(CT),
    Add(Box<CExpr>, Box<CExpr>),
    Sub(Box<CExpr>, Box<CExpr>),
}

#[derive(Debug, Clone)]
enum CLit {
    Call(CT),
    Not(Box<CLit>),
    Is(CT, CExpr),
    Cmp(CmpOp, CExpr, CExpr),
}

#[derive(Debug, Clone)]
struct CClause {
    args: Vec<CT>,
    body: Vec<CLit>,
    nvars: u32,
}

#[derive(Debug, Clone, Default)]
struct Pred {
    all: Vec<u32>,
    by_arg: Vec<HashMap<Const, Vec<u32>>>,
    /// Per position: clauses whose head argument is not a constant.
    open: Vec<Vec<u32>>,
}

impl Pred {
    fn new(arity: usize) -> Self {
        Pred {
            all: Vec::new(),
            by_arg: vec![HashMap::new(); arity],
            open: vec![Vec::new(); arity],
        }
    }

    fn push(&mut self, idx: u32, args: &[CT]) {
        self.all.push(idx);
        for (i, a) in args.iter().enumerate() {
            match a {
                CT::Con(c) => {
                    let open = &self.open[i];
                    self.by_arg[i]
                        .entry(c.clone())
                        .or_insert_with(|| open.clone())
                        .push(idx);
                }
                _ => {
                    self.open[i].push(idx);
                    for bucket in self.by_arg[i].values_mut() {
                        bucket.push(idx);
                    }
                }
            }
        }
    }
}

type PredKey = (Rc<str>, usize);

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    clauses: Vec<Clause>,
    compiled: Vec<CClause>,
    preds: HashMap<PredKey, Pred>,
    symbols: HashMap<String, Rc<str>>,
    max_depth: usize,
}

impl Default for KnowledgeBase {
    fn default() -> Self {
        Self::new()
    }
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.clauses == other.clauses && self.max_depth == other.max_depth
    }
}

struct Compiler<'a> {
    symbols: &'a mut HashMap<String, Rc<str>>,
    vars: HashMap<String, u32>,
    names: Vec<String>,
}

impl Compiler<'_> {
    fn sym(&mut self, s: &str) -> Rc<str> {
        if let Some(r) = self.symbols.get(s) {
            return r.clone();
        }
        let r: Rc<str> = Rc::from(s);
        self.symbols.insert(s.to_string(), r.clone());
        r
    }

    fn var(&mut self, name: &str) -> u32 {
        let fresh = self.names.len() as u32;
        if name == "_" {
            self.names.push(format!("_{fresh}"));
            return fresh;
        }
        if let Some(&v) = self.vars.get(name) {
            return v;
        }
        self.vars.insert(name.to_string(), fresh);
        self.names.push(name.to_string());
        fresh
    }

    fn term(&mut self, t: &Term) -> CT {
        match t {
            Term::Var(v) => CT::Var(self.var(v)),
            Term::Sym(s) => CT::Con(Const::Sym(self.sym(s))),
            Term::Int(n) => CT::Con(Const::Int(*n)),
            Term::Compound(f, args) => {
                let f = self.sym(f);
                CT::App(f, args.iter().map(|a| self.term(a)).collect())
            }
        }
    }

    fn callable(&mut self, t: &Term) -> Result<CT, KbError> {
        match t {
            Term::Sym(s) => Ok(CT::App(self.sym(s), Rc::from(Vec::new()))),
            Term::Compound(..) => Ok(self.term(t)),
            _ => Err(KbError::NotCallable(t.to_string())),
        }
    }

    fn expr(&mut self, e: &Expr) -> CExpr {
        match e {
            Expr::Term(t) => CExpr::T(self.term(t)),
            Expr::Add(a, b) => CExpr::Add(Box::new(self.expr(a)), Box::new(self.expr(b))),
            Expr::Sub(a, b) => CExpr::Sub(Box::new(self.expr(a)), Box::new(self.expr(b))),
        }
    }

    fn literal(&mut self, l: &Literal) -> Result<CLit, KbError> {
        Ok(match l {
            Literal::Pos(t) => CLit::Call(self.callable(t)?),
            Literal::Not(t) => CLit::Not(Box::new(CLit::Call(self.callable(t)?))),
            Literal::Is(t, e) => CLit::Is(self.term(t), self.expr(e)),
            Literal::Cmp(op, a, b) => CLit::Cmp(*op, self.expr(a), self.expr(b)),
        })
    }
}

impl KnowledgeBase {
    pub fn new() -> Self {
        KnowledgeBase {
            clauses: Vec::new(),
            compiled: Vec::new(),
            preds: HashMap::new(),
            symbols: HashMap::new(),
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }

    /// Derivation depth beyond which a query gives up with an error.
    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn fact_count(&self) -> usize {
        self.clauses.iter().filter(|c| c.is_fact()).count()
    }

    pub fn rule_count(&self) -> usize {
        self.len() - self.fact_count()
    }

    pub fn add_rule(&mut self, clause: Clause) -> Result<(), KbError> {
        let (functor, arity) = match &clause.head {
            Term::Compound(f, a) => (f.clone(), a.len()),
            Term::Sym(s) => (s.clone(), 0),
            other => return Err(KbError::BadHead(other.to_string())),
        };
        let mut c = Compiler {
            symbols: &mut self.symbols,
            vars: HashMap::new(),
            names: Vec::new(),
        };
        let args = match &clause.head {
            Term::Compound(_, a) => a.iter().map(|t| c.term(t)).collect(),
            _ => Vec::new(),
        };
        let body = clause
            .body
            .iter()
            .map(|l| c.literal(l))
            .collect::<Result<Vec<_>, _>>()?;
        let nvars = c.names.len() as u32;
        let key = (c.sym(&functor), arity);
        let idx = self.compiled.len() as u32;
        self.preds
            .entry(key)
            .or_insert_with(|| Pred::new(arity))
            .push(idx, &args);
        self.compiled.push(CClause { args, body, nvars });
        self.clauses.push(clause);
        Ok(())
    }

    pub fn add_fact(&mut self, fact: Term) -> Result<(), KbError> {
        if !fact.is_ground() {
            return Err(KbError::NonGroundFact(fact.to_string()));
        }
        self.add_rule(Clause::fact(fact))
    }

    pub fn add_all(&mut self, clauses: impl IntoIterator<Item = Clause>) -> Result<(), KbError> {
        clauses.into_iter().try_for_each(|c| self.add_rule(c))
    }

    /// Drop all ground facts, keeping rules in order.
    pub fn clear_facts(&mut self) {
        let rules: Vec<Clause> = self.clauses.drain(..).filter(|c| !c.is_fact()).collect();
        self.compiled.clear();
        self.preds.clear();
        for r in rules {
            self.add_rule(r).expect("rule was accepted before");
        }
    }

    /// First answer to `goal` by depth-first, leftmost-literal resolution.
    pub fn query(&self, goal: &Term) -> Result<Option<Bindings>, QueryError> {
        let mut symbols = self.symbols.clone();
        let mut c = Compiler {
            symbols: &mut symbols,
            vars: HashMap::new(),
            names: Vec::new(),
        };
        let lit = CLit::Call(
            c.callable(goal)
                .map_err(|_| QueryError::NotCallable(goal.to_string()))?,
        );
        let names = c.names;
        let mut solver = Solver::new(self, names.len());
        let start = Some(Rc::new(Cont {
            lit: &lit,
            off: 0,
            depth: 0,
            next: None,
        }));
        if !solver.run(start, 0)? {
            return Ok(None);
        }
        let mut out = Bindings::new();
        for (i, name) in names.iter().enumerate() {
            if !name.starts_with('_') {
                out.insert(name.clone(), solver.export(&CT::Var(i as u32), 0));
            }
        }
        Ok(Some(out))
    }

    pub fn holds(&self, goal: &Term) -> Result<bool, QueryError> {
        Ok(self.query(goal)?.is_some())
    }
}

struct Cont<'a> {
    lit: &'a CLit,
    off: u32,
    depth: usize,
    next: Option<Rc<Cont<'a>>>,
}

type Goals<'a> = Option<Rc<Cont<'a>>>;

struct Choice<'a> {
    call: Rc<[CT]>,
    off: u32,
    depth: usize,
    rest: Goals<'a>,
    cands: &'a [u32],
    next: usize,
    trail_len: usize,
    store_len: usize,
}

struct Solver<'a> {
    kb: &'a KnowledgeBase,
    store: Vec<Option<(CT, u32)>>,
    trail: Vec<u32>,
    choices: Vec<Choice<'a>>,
}

impl<'a> Solver<'a> {
    fn new(kb: &'a KnowledgeBase, query_vars: usize) -> Self {
        Solver {
            kb,
            store: vec![None; query_vars],
            trail: Vec::new(),
            choices: Vec::new(),
        }
    }

    fn deref(&self, t: &CT, off: u32) -> (CT, u32) {
        let mut t = t.clone();
        let mut off = off;
        while let CT::Var(v) = t {
            match &self.store[(off + v) as usize] {
                Some((b, boff)) => {
                    t = b.clone();
                    off = *boff;
                }
                None => return (CT::Var(off + v), u32::MAX),
            }
        }
        (t, off)
    }

    /// Unbound slots come back from `deref` as `Var(slot)` with this
    /// sentinel frame.
    fn slot(t: &CT, off: u32) -> Option<u32> {
        match t {
            CT::Var(s) if off == u32::MAX => Some(*s),
            _ => None,
        }
    }

    fn bind(&mut self, slot: u32, t: CT, off: u32) {
        let (t, off) = match Self::slot(&t, off) {
            Some(s) => (CT::Var(s), 0),
            None => (t, off),
        };
        self.store[slot as usize] = Some((t, off));
        self.trail.push(slot);
    }

    fn occurs(&self, slot: u32, t: &CT, off: u32) -> bool {
        let (t, off) = self.deref(t, off);
        if let Some(s) = Self::slot(&t, off) {
            return s == slot;
        }
        match &t {
            CT::App(_, args) => args.iter().any(|a| self.occurs(slot, a, off)),
            _ => false,
        }
    }

    fn unify(&mut self, a: &CT, aoff: u32, b: &CT, boff: u32) -> bool {
        let (a, aoff) = self.deref(a, aoff);
        let (b, boff) = self.deref(b, boff);
        match (Self::slot(&a, aoff), Self::slot(&b, boff)) {
            (Some(x), Some(y)) => {
                if x != y {
                    self.bind(x, b, boff);
                }
                true
            }
            (Some(x), None) => {
                if matches!(b, CT::App(..)) && self.occurs(x, &b, boff) {
                    return false;
                }
                self.bind(x, b, boff);
                true
            }
            (None, Some(y)) => {
                if matches!(a, CT::App(..)) && self.occurs(y, &a, aoff) {
                    return false;
                }
                self.bind(y, a, aoff);
                true
            }
            (None, None) => match (&a, &b) {
                (CT::Con(x), CT::Con(y)) => x == y,
                (CT::App(f, xs), CT::App(g, ys)) => {
                    f == g
                        && xs.len() == ys.len()
                        && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, aoff, y, boff))
                }
                _ => false,
            },
        }
    }

    fn undo(&mut self, trail_len: usize, store_len: usize) {
        for slot in self.trail.drain(trail_len..) {
            self.store[slot as usize] = None;
        }
        self.store.truncate(store_len);
    }

    fn is_ground(&self, t: &CT, off: u32) -> bool {
        let (t, off) = self.deref(t, off);
        if Self::slot(&t, off).is_some() {
            return false;
        }
        match &t {
            CT::App(_, args) => args.iter().all(|a| self.is_ground(a, off)),
            _ => true,
        }
    }

    fn export(&self, t: &CT, off: u32) -> Term {
        let (t, off) = self.deref(t, off);
        if let Some(s) = Self::slot(&t, off) {
            return Term::Var(format!("_G{s}"));
        }
        match &t {
            CT::Con(Const::Sym(s)) => Term::Sym(s.to_string()),
            CT::Con(Const::Int(n)) => Term::Int(*n),
            CT::App(f, args) => Term::Compound(f.to_string(), args.iter().map(|a| self.export(a, off)).collect()),
            CT::Var(_) => unreachable!("bound variables are dereferenced"),
        }
    }

    fn show(&self, lit: &CLit, off: u32) -> String {
        match lit {
            CLit::Call(t) => self.export(t, off).to_string(),
            CLit::Not(inner) => format!("not {}", self.show(inner, off)),
            CLit::Is(t, _) => format!("{} is ...", self.export(t, off)),
            CLit::Cmp(op, _, _) => format!("... {} ...", op.symbol()),
        }
    }

    fn eval(&self, e: &CExpr, off: u32, lit: &CLit) -> Result<i64, QueryError> {
        match e {
            CExpr::T(t) => {
                let (t, toff) = self.deref(t, off);
                match &t {
                    CT::Con(Const::Int(n)) => Ok(*n),
                    _ if Self::slot(&t, toff).is_some() => Err(QueryError::NonGroundArithmetic(self.show(lit, off))),
                    _ => Err(QueryError::NotAnInteger(self.export(&t, toff).to_string())),
                }
            }
            CExpr::Add(a, b) => Ok(self.eval(a, off, lit)?.wrapping_add(self.eval(b, off, lit)?)),
            CExpr::Sub(a, b) => Ok(self.eval(a, off, lit)?.wrapping_sub(self.eval(b, off, lit)?)),
        }
    }

    fn candidates(&self, pred: &'a Pred, args: &[CT], off: u32) -> &'a [u32] {
        let mut best: &'a [u32] = &pred.all;
        for (i, a) in args.iter().enumerate() {
            if let (CT::Con(c), _) = self.deref(a, off) {
                let bucket = pred.by_arg[i].get(&c).unwrap_or(&pred.open[i]);
                if bucket.len() < best.len() {
                    best = bucket;
                }
            }
        }
        best
    }

    /// Try candidate clauses from `choice.next` on. On success returns the
    /// new goal list, having pushed a choice point if alternatives remain.
    fn resolve(&mut self, choice: Choice<'a>) -> Option<Goals<'a>> {
        let Choice {
            call,
            off,
            depth,
            rest,
            cands,
            next,
            trail_len,
            store_len,
        } = choice;
        for (i, &ci) in cands.iter().enumerate().skip(next) {
            let clause = &self.kb.compiled[ci as usize];
            let frame = self.store.len() as u32;
            self.store.resize(self.store.len() + clause.nvars as usize, None);
            let ok = clause
                .args
                .iter()
                .zip(call.iter())
                .all(|(h, g)| self.unify(h, frame, g, off));
            if !ok {
                self.undo(trail_len, store_len);
                continue;
            }
            if i + 1 < cands.len() {
                self.choices.push(Choice {
                    call: call.clone(),
                    off,
                    depth,
                    rest: rest.clone(),
                    cands,
                    next: i + 1,
                    trail_len,
                    store_len,
                });
            }
            let mut goals = rest;
            for lit in self.kb.compiled[ci as usize].body.iter().rev() {
                goals = Some(Rc::new(Cont {
                    lit,
                    off: frame,
                    depth: depth + 1,
                    next: goals,
                }));
            }
            return Some(goals);
        }
        None
    }

    fn backtrack(&mut self, barrier: usize) -> Option<Goals<'a>> {
        while self.choices.len() > barrier {
            let choice = self.choices.pop().expect("len checked");
            self.undo(choice.trail_len, choice.store_len);
            if let Some(goals) = self.resolve(choice) {
                return Some(goals);
            }
        }
        None
    }

    fn run(&mut self, mut goals: Goals<'a>, barrier: usize) -> Result<bool, QueryError> {
        loop {
            let Some(g) = goals else {
                return Ok(true);
            };
            if g.depth > self.kb.max_depth {
                return Err(QueryError::DepthExceeded(self.kb.max_depth));
            }
            let ok = match g.lit {
                CLit::Call(t) => {
                    let (t, off) = self.deref(t, g.off);
                    let CT::App(f, args) = &t else {
                        return Err(QueryError::NotCallable(self.export(&t, off).to_string()));
                    };
                    let kb = self.kb;
                    match kb.preds.get(&(f.clone(), args.len())) {
                        None => false,
                        Some(pred) => {
                            let cands = self.candidates(pred, args, off);
                            let choice = Choice {
                                call: args.clone(),
                                off,
                                depth: g.depth,
                                rest: g.next.clone(),
                                cands,
                                next: 0,
                                trail_len: self.trail.len(),
                                store_len: self.store.len(),
                            };
                            match self.resolve(choice) {
                                Some(next) => {
                                    goals = next;
                                    continue;
                                }
                                None => false,
                            }
                        }
                    }
                }
                CLit::Not(inner) => {
                    let CLit::Call(t) = &**inner else {
                        unreachable!("negation wraps a call")
                    };
                    if !self.is_ground(t, g.off) {
                        return Err(QueryError::NonGroundNegation(self.show(inner, g.off)));
                    }
                    let (trail_len, store_len, cps) = (self.trail.len(), self.store.len(), self.choices.len());
                    let sub = Some(Rc::new(Cont {
                        lit: inner,
                        off: g.off,
                        depth: g.depth + 1,
                        next: None,
                    }));
                    let proved = self.run(sub, cps)?;
                    self.choices.truncate(cps);
                    self.undo(trail_len, store_len);
                    !proved
                }
                CLit::Is(lhs, e) => {
                    let n = self.eval(e, g.off, g.lit)?;
                    self.unify(lhs, g.off, &CT::Con(Const::Int(n)), 0)
                }
                CLit::Cmp(op, a, b) => {
                    let x = self.eval(a, g.off, g.lit)?;
                    let y = self.eval(b, g.off, g.lit)?;
                    op.holds(x, y)
                }
            };
            if ok {
                goals = g.next.clone();
            } else {
                match self.backtrack(barrier) {
                    Some(next) => goals = next,
                    None => return Ok(false),
                }
            }
        }
    }
}
