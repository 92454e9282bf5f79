//! Reference oracles and generators shared by the integration tests. None of
//! them call into the code under test except to build its inputs.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use bdi_tactics::action::Action;
use bdi_tactics::goal::{self, Goal, GoalStatus, GoalStructure, GoalTree};
use bdi_tactics::gomoku::{Board, Piece};
use bdi_tactics::tactic::{self, Tactic};
use bdi_tactics::value::Value;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- tactics

/// Plain tactic tree; leaves are numbered left to right.
#[derive(Clone, Debug)]
pub enum OTactic {
    Leaf(usize),
    Seq(Vec<OTactic>),
    Any(Vec<OTactic>),
    First(Vec<OTactic>),
}

impl OTactic {
    pub fn leaves(&self) -> usize {
        match self {
            OTactic::Leaf(_) => 1,
            OTactic::Seq(c) | OTactic::Any(c) | OTactic::First(c) => c.iter().map(OTactic::leaves).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            OTactic::Leaf(_) => 0,
            OTactic::Seq(c) | OTactic::Any(c) | OTactic::First(c) => 1 + c.iter().map(OTactic::depth).max().unwrap(),
        }
    }

    fn children(&self) -> &[OTactic] {
        match self {
            OTactic::Leaf(_) => &[],
            OTactic::Seq(c) | OTactic::Any(c) | OTactic::First(c) => c,
        }
    }

    pub fn at(&self, path: &[usize]) -> &OTactic {
        path.iter().fold(self, |t, &i| &t.children()[i])
    }

    /// Every node path, pre-order.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for (i, c) in self.children().iter().enumerate() {
            for mut p in c.paths() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    /// Every root-to-leaf path under this node with its leaf id.
    fn leaf_paths(&self) -> Vec<(Vec<usize>, usize)> {
        match self {
            OTactic::Leaf(id) => vec![(Vec::new(), *id)],
            _ => self
                .children()
                .iter()
                .enumerate()
                .flat_map(|(i, c)| {
                    c.leaf_paths().into_iter().map(move |(mut p, id)| {
                        p.insert(0, i);
                        (p, id)
                    })
                })
                .collect(),
        }
    }
}

pub fn gen_tactic(r: &mut ChaCha8Rng, max_depth: usize, max_leaves: usize) -> OTactic {
    fn go(r: &mut ChaCha8Rng, depth: usize, max_depth: usize, next: &mut usize) -> OTactic {
        if depth == max_depth || r.gen_bool(0.35) {
            *next += 1;
            return OTactic::Leaf(*next - 1);
        }
        let k = r.gen_range(1..=3);
        let children = (0..k).map(|_| go(r, depth + 1, max_depth, next)).collect();
        match r.gen_range(0..3) {
            0 => OTactic::Seq(children),
            1 => OTactic::Any(children),
            _ => OTactic::First(children),
        }
    }
    loop {
        let mut next = 0;
        let t = go(r, 0, max_depth, &mut next);
        if t.leaves() <= max_leaves {
            return t;
        }
    }
}

/// Leaf `i` becomes action `a<i>`, enabled iff `state[i]`.
pub fn to_tactic(t: &OTactic) -> Tactic<Vec<bool>> {
    match t {
        OTactic::Leaf(i) => {
            let i = *i;
            tactic::lift(Action::new(format!("a{i}")).on_when(move |s: &Vec<bool>| s[i]))
        }
        OTactic::Seq(c) => tactic::seq(c.iter().map(to_tactic).collect()),
        OTactic::Any(c) => tactic::any_of(c.iter().map(to_tactic).collect()),
        OTactic::First(c) => tactic::first_of(c.iter().map(to_tactic).collect()),
    }
}

/// first(node) by enumerating every root-to-leaf path under `node` and
/// keeping the paths the combinators admit.
pub fn oracle_first(t: &OTactic, enabled: &[bool]) -> Vec<usize> {
    t.leaf_paths()
        .into_iter()
        .filter(|(path, id)| enabled[*id] && admitted(t, path, enabled))
        .map(|(_, id)| id)
        .collect()
}

fn admitted(t: &OTactic, path: &[usize], enabled: &[bool]) -> bool {
    let Some((&i, rest)) = path.split_first() else {
        return true;
    };
    let ok = match t {
        OTactic::Seq(_) => i == 0,
        OTactic::Any(_) => true,
        OTactic::First(c) => c[..i].iter().all(|sib| oracle_first(sib, enabled).is_empty()),
        OTactic::Leaf(_) => unreachable!(),
    };
    ok && admitted(&t.children()[i], rest, enabled)
}

/// next(node) on paths: climb until a SEQ has a right sibling.
pub fn oracle_next(t: &OTactic, path: &[usize]) -> Vec<usize> {
    let mut p = path.to_vec();
    while let Some(i) = p.pop() {
        if let OTactic::Seq(c) = t.at(&p) {
            if i + 1 < c.len() {
                p.push(i + 1);
                return p;
            }
        }
    }
    Vec::new()
}

/// Complete executions of `t` as leaf sequences, ignoring guards. ANYOF and
/// FIRSTOF run exactly one child, SEQ runs all in order. Stops at `cap`.
pub fn executions(t: &OTactic, cap: usize) -> Vec<Vec<usize>> {
    match t {
        OTactic::Leaf(id) => vec![vec![*id]],
        OTactic::Any(c) | OTactic::First(c) => {
            let mut out = Vec::new();
            for ch in c {
                out.extend(executions(ch, cap));
                out.truncate(cap);
            }
            out
        }
        OTactic::Seq(c) => {
            let mut out = vec![Vec::new()];
            for ch in c {
                let tails = executions(ch, cap);
                let mut grown = Vec::new();
                'outer: for head in &out {
                    for tail in &tails {
                        let mut e = head.clone();
                        e.extend(tail);
                        grown.push(e);
                        if grown.len() >= cap {
                            break 'outer;
                        }
                    }
                }
                out = grown;
            }
            out
        }
    }
}

/// Leaves an execution of the sub-tactic at `path` can start with.
pub fn start_leaves(t: &OTactic, path: &[usize]) -> BTreeSet<usize> {
    match t.at(path) {
        OTactic::Leaf(id) => BTreeSet::from([*id]),
        OTactic::Seq(_) => start_leaves(t.at(path), &[0]),
        OTactic::Any(c) | OTactic::First(c) => (0..c.len()).flat_map(|i| start_leaves(t.at(path), &[i])).collect(),
    }
}

pub fn leaf_path(t: &OTactic, leaf: usize) -> Vec<usize> {
    t.leaf_paths().into_iter().find(|(_, id)| *id == leaf).unwrap().0
}

// ---------------------------------------------------------------- goals

#[derive(Clone, Debug)]
pub enum OGoal {
    Leaf(usize),
    Seq(Vec<OGoal>),
    First(Vec<OGoal>),
    Repeat(Box<OGoal>, i64),
}

impl OGoal {
    pub fn leaves(&self) -> usize {
        match self {
            OGoal::Leaf(_) => 1,
            OGoal::Seq(c) | OGoal::First(c) => c.iter().map(OGoal::leaves).sum(),
            OGoal::Repeat(c, _) => c.leaves(),
        }
    }
}

pub fn gen_goal(r: &mut ChaCha8Rng, max_depth: usize, max_leaves: usize) -> OGoal {
    fn go(r: &mut ChaCha8Rng, depth: usize, max_depth: usize, next: &mut usize) -> OGoal {
        if depth == max_depth || r.gen_bool(0.35) {
            *next += 1;
            return OGoal::Leaf(*next - 1);
        }
        match r.gen_range(0..5) {
            0 => OGoal::Repeat(Box::new(go(r, depth + 1, max_depth, next)), r.gen_range(1..=5)),
            k => {
                let n = r.gen_range(1..=3);
                let children = (0..n).map(|_| go(r, depth + 1, max_depth, next)).collect();
                if k <= 2 {
                    OGoal::Seq(children)
                } else {
                    OGoal::First(children)
                }
            }
        }
    }
    loop {
        let mut next = 0;
        let g = go(r, 0, max_depth, &mut next);
        if g.leaves() <= max_leaves {
            return g;
        }
    }
}

fn dummy_goal<S: 'static>(name: String) -> Goal<S> {
    Goal::new(
        name,
        |_| true,
        tactic::lift(Action::new("noop").on(|_: &S| Some(Value::Unit))),
    )
    .unwrap()
}

/// `prefix<i>` leaf goals; REPEAT bmax becomes the node's `bmax`.
pub fn to_goal<S: 'static>(g: &OGoal, prefix: &str) -> GoalStructure<S> {
    match g {
        OGoal::Leaf(i) => dummy_goal::<S>(format!("{prefix}{i}")).lift(),
        OGoal::Seq(c) => goal::seq(c.iter().map(|c| to_goal(c, prefix)).collect()),
        OGoal::First(c) => goal::first_of(c.iter().map(|c| to_goal(c, prefix)).collect()),
        OGoal::Repeat(c, b) => goal::repeat(to_goal(c, prefix)).with_bmax(*b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OStatus {
    Solved,
    Failed,
}

/// Direct recursive evaluation of a goal structure against a scripted
/// outcome stream: each time a leaf is worked on it costs one unit and
/// takes the next outcome.
pub struct GoalOracle<'a> {
    script: &'a [bool],
    pos: usize,
    pub trace: Vec<usize>,
    pub status: BTreeMap<Vec<usize>, OStatus>,
}

impl<'a> GoalOracle<'a> {
    pub fn run(g: &OGoal, script: &'a [bool]) -> Self {
        let mut o = GoalOracle {
            script,
            pos: 0,
            trace: Vec::new(),
            status: BTreeMap::new(),
        };
        o.eval(g, Vec::new(), None);
        o
    }

    fn set(&mut self, path: &[usize], ok: bool) -> bool {
        self.status
            .insert(path.to_vec(), if ok { OStatus::Solved } else { OStatus::Failed });
        ok
    }

    /// Returns success and units spent. `avail` is the parent's remaining
    /// budget, `None` for unbounded.
    fn eval(&mut self, g: &OGoal, path: Vec<usize>, avail: Option<i64>) -> (bool, i64) {
        let child = |i: usize| {
            let mut p = path.clone();
            p.push(i);
            p
        };
        match g {
            OGoal::Leaf(id) => {
                let ok = self.script[self.pos % self.script.len()];
                self.pos += 1;
                self.trace.push(*id);
                (self.set(&path, ok), 1)
            }
            OGoal::Seq(c) | OGoal::First(c) => {
                let is_seq = matches!(g, OGoal::Seq(_));
                let mut spent = 0;
                for (i, ch) in c.iter().enumerate() {
                    let (ok, sp) = self.eval(ch, child(i), avail.map(|a| a - spent));
                    spent += sp;
                    if ok != is_seq {
                        return (self.set(&path, ok), spent);
                    }
                }
                (self.set(&path, is_seq), spent)
            }
            OGoal::Repeat(c, bmax) => {
                let mut left = avail.map_or(*bmax, |a| a.min(*bmax));
                let mut spent = 0;
                loop {
                    let (ok, sp) = self.eval(c, child(0), Some(left));
                    spent += sp;
                    left -= sp;
                    if ok || left <= 0 {
                        return (self.set(&path, ok), spent);
                    }
                    let prefix = child(0);
                    self.status.retain(|p, _| !p.starts_with(&prefix));
                }
            }
        }
    }
}

/// Final status of every node of `tree` keyed by child-index path; unstarted
/// nodes are left out.
pub fn tree_statuses<S>(tree: &GoalTree<S>) -> BTreeMap<Vec<usize>, OStatus> {
    let mut out = BTreeMap::new();
    let mut stack = vec![(tree.root(), Vec::new())];
    while let Some((id, path)) = stack.pop() {
        match tree.status(id) {
            GoalStatus::Solved => {
                out.insert(path.clone(), OStatus::Solved);
            }
            GoalStatus::Failed => {
                out.insert(path.clone(), OStatus::Failed);
            }
            _ => {}
        }
        for (i, &c) in tree.children(id).iter().enumerate() {
            let mut p = path.clone();
            p.push(i);
            stack.push((c, p));
        }
    }
    out
}

// ---------------------------------------------------------------- logic

pub const DOMAIN: [&str; 5] = ["c0", "c1", "c2", "c3", "c4"];

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Arg {
    Var(usize),
    Const(usize),
}

#[derive(Clone, Debug)]
pub struct Atom {
    pub pred: usize,
    pub args: Vec<Arg>,
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub head: Atom,
    pub pos: Vec<Atom>,
    pub neg: Vec<Atom>,
}

/// A hierarchical program: predicates `p0..pB` are base relations given by
/// facts, each later predicate is defined by rules over strictly earlier
/// ones, so the program is stratified and every model is finite.
#[derive(Clone, Debug)]
pub struct Program {
    pub arity: Vec<usize>,
    pub base: usize,
    pub facts: BTreeSet<(usize, Vec<usize>)>,
    pub rules: Vec<Rule>,
}

fn arg_text(a: &Arg) -> String {
    match a {
        Arg::Var(v) => format!("V{v}"),
        Arg::Const(c) => DOMAIN[*c].to_string(),
    }
}

pub fn atom_text(a: &Atom) -> String {
    let args: Vec<String> = a.args.iter().map(arg_text).collect();
    format!("p{}({})", a.pred, args.join(","))
}

impl Program {
    pub fn generate(r: &mut ChaCha8Rng) -> Program {
        let preds = r.gen_range(4..=8);
        let base = r.gen_range(2..=3).min(preds - 1);
        let arity: Vec<usize> = (0..preds).map(|_| r.gen_range(1..=2)).collect();
        let mut facts = BTreeSet::new();
        let nfacts = r.gen_range(0..=60);
        for _ in 0..nfacts {
            let p = r.gen_range(0..base);
            facts.insert((p, (0..arity[p]).map(|_| r.gen_range(0..DOMAIN.len())).collect()));
        }
        let mut rules = Vec::new();
        for head in base..preds {
            for _ in 0..r.gen_range(1..=3) {
                let nvars = r.gen_range(1..=3);
                let arg = |r: &mut ChaCha8Rng| {
                    if r.gen_bool(0.8) {
                        Arg::Var(r.gen_range(0..nvars))
                    } else {
                        Arg::Const(r.gen_range(0..DOMAIN.len()))
                    }
                };
                let mut pos: Vec<Atom> = (0..r.gen_range(1..=3))
                    .map(|_| {
                        let p = r.gen_range(0..head);
                        Atom {
                            pred: p,
                            args: (0..arity[p]).map(|_| arg(r)).collect(),
                        }
                    })
                    .collect();
                let mut bound: Vec<usize> = pos
                    .iter()
                    .flat_map(|a| a.args.iter())
                    .filter_map(|a| match a {
                        Arg::Var(v) => Some(*v),
                        Arg::Const(_) => None,
                    })
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                if bound.is_empty() {
                    pos[0].args[0] = Arg::Var(0);
                    bound.push(0);
                }
                let bound_arg = |r: &mut ChaCha8Rng| {
                    if r.gen_bool(0.85) {
                        Arg::Var(*bound.choose(r).unwrap())
                    } else {
                        Arg::Const(r.gen_range(0..DOMAIN.len()))
                    }
                };
                let neg = (0..r.gen_range(0..=1))
                    .map(|_| {
                        let p = r.gen_range(0..head);
                        Atom {
                            pred: p,
                            args: (0..arity[p]).map(|_| bound_arg(r)).collect(),
                        }
                    })
                    .collect();
                let head_atom = Atom {
                    pred: head,
                    args: (0..arity[head]).map(|_| bound_arg(r)).collect(),
                };
                rules.push(Rule {
                    head: head_atom,
                    pos,
                    neg,
                });
            }
        }
        Program {
            arity,
            base,
            facts,
            rules,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for (p, args) in &self.facts {
            let args: Vec<&str> = args.iter().map(|&c| DOMAIN[c]).collect();
            out.push_str(&format!("p{p}({}).\n", args.join(",")));
        }
        for rule in &self.rules {
            let mut body: Vec<String> = rule.pos.iter().map(atom_text).collect();
            body.extend(rule.neg.iter().map(|a| format!("not {}", atom_text(a))));
            out.push_str(&format!("{} :- {}.\n", atom_text(&rule.head), body.join(", ")));
        }
        out
    }

    /// Ground model by naive forward chaining, one predicate at a time.
    pub fn model(&self) -> BTreeSet<(usize, Vec<usize>)> {
        let mut model = self.facts.clone();
        for head in self.base..self.arity.len() {
            let mut derived = Vec::new();
            for rule in self.rules.iter().filter(|r| r.head.pred == head) {
                let nvars = 3;
                let total = DOMAIN.len().pow(nvars as u32);
                for code in 0..total {
                    let env: Vec<usize> = (0..nvars)
                        .map(|i| code / DOMAIN.len().pow(i as u32) % DOMAIN.len())
                        .collect();
                    let ground = |a: &Atom| {
                        let args = a
                            .args
                            .iter()
                            .map(|x| match x {
                                Arg::Var(v) => env[*v],
                                Arg::Const(c) => *c,
                            })
                            .collect();
                        (a.pred, args)
                    };
                    if rule.pos.iter().all(|a| model.contains(&ground(a)))
                        && rule.neg.iter().all(|a| !model.contains(&ground(a)))
                    {
                        derived.push(ground(&rule.head));
                    }
                }
            }
            model.extend(derived);
        }
        model
    }
}

/// Does ground `fact` match query `q` (respecting repeated variables)?
pub fn matches(q: &Atom, fact: &(usize, Vec<usize>)) -> bool {
    if q.pred != fact.0 {
        return false;
    }
    let mut env = BTreeMap::new();
    q.args.iter().zip(&fact.1).all(|(a, &c)| match a {
        Arg::Const(k) => *k == c,
        Arg::Var(v) => *env.entry(*v).or_insert(c) == c,
    })
}

// ---------------------------------------------------------------- gomoku

pub const LINES: [(i64, i64); 4] = [(1, 0), (0, 1), (1, 1), (1, -1)];

/// Grid view of a board, `grid[y][x]`.
pub fn grid(b: &Board) -> Vec<Vec<Option<Piece>>> {
    let n = b.size();
    (0..n).map(|y| (0..n).map(|x| b.get(x, y)).collect()).collect()
}

fn cell(g: &[Vec<Option<Piece>>], x: i64, y: i64) -> Option<Option<Piece>> {
    if x < 0 || y < 0 {
        return None;
    }
    g.get(y as usize).and_then(|row| row.get(x as usize)).copied()
}

/// Some window of five consecutive cells is all `p`.
pub fn five_anywhere(g: &[Vec<Option<Piece>>], p: Piece) -> bool {
    let n = g.len() as i64;
    (0..n).any(|y| {
        (0..n).any(|x| {
            LINES
                .iter()
                .any(|&(dx, dy)| (0..5).all(|k| cell(g, x + k * dx, y + k * dy) == Some(Some(p))))
        })
    })
}

/// Empty squares where `p` would complete a five-window through the square.
pub fn oracle_winning_squares(g: &[Vec<Option<Piece>>], p: Piece) -> BTreeSet<(i64, i64)> {
    let n = g.len() as i64;
    let mut out = BTreeSet::new();
    for y in 0..n {
        for x in 0..n {
            if g[y as usize][x as usize].is_some() {
                continue;
            }
            let wins = LINES.iter().any(|&(dx, dy)| {
                (0..5).any(|start| {
                    (0..5).all(|k| {
                        let (cx, cy) = (x + (k - start) * dx, y + (k - start) * dy);
                        (cx, cy) == (x, y) || cell(g, cx, cy) == Some(Some(p))
                    })
                })
            });
            if wins {
                out.insert((x, y));
            }
        }
    }
    out
}

/// Random legal-count board: crosses equal circles or one more. Lines of
/// four are planted now and then so that winning squares are common.
pub fn random_board(r: &mut ChaCha8Rng, n: usize) -> Board {
    let mut cells = vec![vec!['.'; n]; n];
    let density = r.gen_range(0.05..0.75);
    let mut squares: Vec<(usize, usize)> = (0..n).flat_map(|y| (0..n).map(move |x| (x, y))).collect();
    squares.shuffle(r);
    let stones = ((n * n) as f64 * density) as usize;
    let mut placed = 0;
    if r.gen_bool(0.5) && n >= 5 {
        let (dx, dy) = LINES[r.gen_range(0..4)];
        let glyph = if r.gen_bool(0.5) { 'x' } else { 'o' };
        let x0 = r.gen_range(0..n as i64);
        let y0 = r.gen_range(0..n as i64);
        for k in 0..4 {
            let (x, y) = (x0 + k * dx, y0 + k * dy);
            if x >= 0 && y >= 0 && (x as usize) < n && (y as usize) < n {
                cells[y as usize][x as usize] = glyph;
            }
        }
    }
    let count = |cells: &Vec<Vec<char>>, c: char| cells.iter().flatten().filter(|&&g| g == c).count();
    for &(x, y) in &squares {
        if placed >= stones {
            break;
        }
        if cells[y][x] == '.' {
            cells[y][x] = if placed % 2 == 0 { 'x' } else { 'o' };
            placed += 1;
        }
    }
    // rebalance by clearing surplus stones
    loop {
        let (xs, os) = (count(&cells, 'x'), count(&cells, 'o'));
        let surplus = if xs > os + 1 {
            'x'
        } else if os > xs {
            'o'
        } else {
            break;
        };
        let &(x, y) = squares.iter().rev().find(|&&(x, y)| cells[y][x] == surplus).unwrap();
        cells[y][x] = '.';
    }
    let text: Vec<String> = cells.iter().map(|row| row.iter().collect()).collect();
    Board::from_fixture(&text.join("\n")).expect("balanced board")
}
