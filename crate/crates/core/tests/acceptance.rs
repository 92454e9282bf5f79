//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed; the
//! process exits non-zero when any criterion fails.

mod common;

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::process::ExitCode;
use std::rc::Rc;
use std::time::{Duration, Instant};

use rand::Rng;

use bdi_tactics::action::Action;
use bdi_tactics::budget::Budget;
use bdi_tactics::cli::{execute, run_scenario, RunConfig, Scenario};
use bdi_tactics::environment::{NullEnvironment, ScriptedEnvironment};
use bdi_tactics::goal::{self, Goal, GoalStructure, GoalTree};
use bdi_tactics::gomoku::analysis::winning_squares;
use bdi_tactics::gomoku::env::{GomokuBeliefs, THREAT_PREDICATE, WIN_PREDICATE};
use bdi_tactics::gomoku::{play_game, GameConfig, Piece, Player};
use bdi_tactics::logic::builder::pred;
use bdi_tactics::logic::{parse_program, unify, Bindings, KnowledgeBase, Term};
use bdi_tactics::runtime::messaging::{Addressing, ComNode, Inbox, Message};
use bdi_tactics::runtime::{Agent, TickOutcome, Wake};
use bdi_tactics::state::AgentState;
use bdi_tactics::tactic::{self, TacticTree};
use bdi_tactics::value::Value;

use common::*;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<String, String> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(format!("{:.2}s", took.as_secs_f64()))
}

// 1 ------------------------------------------------------------------

fn tactic_oracle() -> Verdict {
    let start = Instant::now();
    let mut r = rng(1);
    let mut checks = 0usize;
    for case in 0..1000 {
        let t = gen_tactic(&mut r, 4, 12);
        ensure!(t.depth() <= 4 && t.leaves() <= 12, "generator out of range");
        let tree = TacticTree::new(to_tactic(&t)).map_err(|e| e.to_string())?;
        let enabled: Vec<bool> = (0..t.leaves()).map(|_| r.gen_bool(0.5)).collect();
        for id in tree.node_ids() {
            let path = tree.path(id);
            let want: Vec<String> = oracle_first(t.at(&path), &enabled)
                .iter()
                .map(|i| format!("a{i}"))
                .collect();
            let got = tree.first_ids(id, &enabled);
            ensure!(
                got == want,
                "case {case}: first at {path:?} is {got:?}, oracle {want:?}"
            );
            let next = tree.path(tree.next(id));
            let want_next = oracle_next(&t, &path);
            ensure!(
                next == want_next,
                "case {case}: next of {path:?} is {next:?}, oracle {want_next:?}"
            );
            checks += 2;
        }
        for run in executions(&t, 64) {
            for w in run.windows(2) {
                let leaf = tree.leaf(&format!("a{}", w[0])).unwrap();
                let next = tree.path(tree.next(leaf));
                ensure!(
                    start_leaves(&t, &next).contains(&w[1]),
                    "case {case}: execution {run:?} cannot continue from a{} to a{}",
                    w[0],
                    w[1]
                );
            }
            let last = tree.leaf(&format!("a{}", run.last().unwrap())).unwrap();
            ensure!(
                tree.next(last) == tree.root(),
                "case {case}: execution end does not return to root"
            );
            checks += run.len();
        }
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("1000 trees, {checks} checks, {t}"))
}

// 2 ------------------------------------------------------------------

fn definition_fixtures() -> Verdict {
    use OTactic::*;
    let tree = |t: OTactic| TacticTree::new(to_tactic(&t)).unwrap();
    let on = |bits: &[bool]| bits.to_vec();
    let mut n = 0;
    let mut check = |ok: bool, what: &str| -> Result<(), String> {
        n += 1;
        ensure!(ok, "fixture failed: {what}");
        Ok(())
    };

    let lift = tree(Leaf(0));
    check(
        lift.first_ids(lift.root(), &on(&[true])) == ["a0"],
        "first(lift(a)) = {a}",
    )?;
    check(
        lift.first_ids(lift.root(), &on(&[false])).is_empty(),
        "first(lift(a)) = {} when disabled",
    )?;

    let s = tree(Seq(vec![Leaf(0), Leaf(1)]));
    check(
        s.first_ids(s.root(), &on(&[false, true])).is_empty(),
        "SEQ looks at its head only",
    )?;
    let a = tree(Any(vec![Leaf(0), Leaf(1)]));
    check(
        a.first_ids(a.root(), &on(&[true, true])) == ["a0", "a1"],
        "ANYOF is the union",
    )?;
    let f = tree(First(vec![Leaf(0), Leaf(1)]));
    check(
        f.first_ids(f.root(), &on(&[false, true])) == ["a1"],
        "FIRSTOF falls through",
    )?;
    check(
        f.first_ids(f.root(), &on(&[true, true])) == ["a0"],
        "FIRSTOF takes the leftmost",
    )?;

    let deep = tree(Seq(vec![First(vec![Leaf(0), Any(vec![Leaf(1), Leaf(2)])]), Leaf(3)]));
    check(
        !deep.enabled(deep.root(), &on(&[false; 4])),
        "all disabled is not enabled",
    )?;
    check(
        f.enabled(f.root(), &on(&[false, true])),
        "FIRSTOF with the last child enabled",
    )?;
    check(
        s.enabled(s.root(), &on(&[true, false])),
        "SEQ with only its head enabled",
    )?;

    let abc = tree(Seq(vec![Leaf(0), Leaf(1), Leaf(2)]));
    let (a0, a1, a2) = (
        abc.leaf("a0").unwrap(),
        abc.leaf("a1").unwrap(),
        abc.leaf("a2").unwrap(),
    );
    check(abc.next(a0) == a1, "next(a) = b in SEQ(a,b,c)")?;
    check(
        abc.next(a2) == abc.root(),
        "next of the last SEQ child climbs to the root",
    )?;
    check(abc.next(abc.root()) == abc.root(), "next(root) = root")?;

    let t = tree(First(vec![Seq(vec![Leaf(0), Leaf(1)]), Leaf(2)]));
    check(
        t.next(t.leaf("a1").unwrap()) == t.root(),
        "next(b) = T in FIRSTOF(SEQ(a,b),c)",
    )?;
    check(
        t.next(t.leaf("a0").unwrap()) == t.leaf("a1").unwrap(),
        "next(a) = b inside the SEQ",
    )?;

    let after_a = |b: bool| s.next_actions(s.leaf("a0").unwrap(), &on(&[true, b])).len();
    check(after_a(true) == 1 && after_a(false) == 0, "after a in SEQ(a,b) only b")?;
    check(
        lift.next_actions(lift.root(), &on(&[true])).len() == 1,
        "a sole root action resets to itself",
    )?;
    check(
        s.next_actions(s.leaf("a1").unwrap(), &on(&[true, true])).len() == 1
            && s.first_ids(s.next(s.leaf("a1").unwrap()), &on(&[true, true])) == ["a0"],
        "after the last action, first(root)",
    )?;
    let seq_tail = tree(Seq(vec![Any(vec![Leaf(0), Seq(vec![Leaf(1), Leaf(2)])]), Leaf(3)]));
    check(
        seq_tail.next(seq_tail.leaf("a2").unwrap()) == seq_tail.leaf("a3").unwrap(),
        "SEQ-last routes through the parent",
    )?;
    Ok(format!("{n} fixtures"))
}

// 3 ------------------------------------------------------------------

fn run_goal_tree(tree: &mut GoalTree<()>, script: &[bool], cap: usize) -> Result<Vec<usize>, String> {
    let mut trace = Vec::new();
    let mut pos = 0;
    while let Some(leaf) = tree.current_leaf() {
        ensure!(trace.len() < cap, "no termination after {cap} steps");
        trace.push(tree.name(leaf)[1..].parse::<usize>().unwrap());
        let ok = script[pos % script.len()];
        pos += 1;
        tree.deduct(1);
        if ok {
            tree.mark_solved(leaf).map_err(|e| e.to_string())?;
        } else {
            tree.mark_failed(leaf).map_err(|e| e.to_string())?;
        }
    }
    Ok(trace)
}

fn goal_oracle() -> Verdict {
    let start = Instant::now();
    let mut r = rng(3);
    let mut steps = 0;
    for case in 0..1000 {
        let g = gen_goal(&mut r, 4, 12);
        let script: Vec<bool> = (0..r.gen_range(1..48)).map(|_| r.gen_bool(0.5)).collect();
        let oracle = GoalOracle::run(&g, &script);
        let mut tree = GoalTree::new(to_goal::<()>(&g, "g")).map_err(|e| e.to_string())?;
        let trace = run_goal_tree(&mut tree, &script, 1_000_000)?;
        ensure!(
            trace == oracle.trace,
            "case {case}: goal trace {trace:?}, oracle {:?}",
            oracle.trace
        );
        let statuses = tree_statuses(&tree);
        ensure!(
            statuses == oracle.status,
            "case {case}: statuses {statuses:?}, oracle {:?}",
            oracle.status
        );
        steps += trace.len();
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("1000 trees, {steps} goal steps, {t}"))
}

// 4 ------------------------------------------------------------------

fn leaf<S: 'static>(name: &str) -> GoalStructure<S> {
    // a leaf goal called exactly `name`
    let g = Goal::new(
        name,
        |_| true,
        tactic::lift(Action::new("noop").on(|_: &S| Some(Value::Unit))),
    )
    .unwrap();
    g.lift()
}

fn rewrites() -> Verdict {
    let base = || goal::seq(vec![leaf::<()>("g0"), leaf::<()>("g1")]);
    let mut t = GoalTree::new(base()).unwrap();
    t.add_after(leaf("H")).map_err(|e| e.to_string())?;
    ensure!(t.shape() == "SEQ(g0,H,g1)", "addAfter gave {}", t.shape());
    let mut t = GoalTree::new(base()).unwrap();
    t.add_before(leaf("H"), Budget::Unbounded).map_err(|e| e.to_string())?;
    ensure!(t.shape() == "SEQ(REPEAT(SEQ(H,g0)),g1)", "addBefore gave {}", t.shape());
    ensure!(
        t.current_goal().map(|g| g.name()) == Some("H"),
        "addBefore did not adopt H"
    );

    let mut r = rng(4);
    let mut ops = 0;
    for case in 0..200 {
        let g = gen_goal(&mut r, 3, 8);
        let mut t = GoalTree::new(to_goal::<()>(&g, "g")).unwrap();
        let mut fresh = 0;
        for _ in 0..30 {
            if t.current_leaf().is_none() {
                break;
            }
            let leaf_id = t.current_leaf().unwrap();
            fresh += 1;
            let h = to_goal::<()>(&gen_goal(&mut r, 2, 4), &format!("h{fresh}_"));
            let op = r.gen_range(0..4);
            let res = match op {
                0 => t.add_after(h),
                1 => t.add_before(h, Budget::Finite(r.gen_range(1..6))),
                2 => {
                    t.deduct(1);
                    t.mark_solved(leaf_id)
                }
                _ => {
                    t.deduct(1);
                    t.mark_failed(leaf_id)
                }
            };
            res.map_err(|e| format!("case {case}: op {op}: {e}"))?;
            t.check_invariants()
                .map_err(|e| format!("case {case} after op {op}: {e}\n{}", t.render()))?;
            ops += 1;
        }
    }
    Ok(format!("2 exact rewrites, 200 sequences, {ops} checked operations"))
}

// 5 ------------------------------------------------------------------

type NullState = AgentState<NullEnvironment>;

fn random_bmax(r: &mut rand_chacha::ChaCha8Rng) -> Budget {
    if r.gen_bool(0.3) {
        Budget::Unbounded
    } else {
        Budget::Finite(r.gen_range(1..=8))
    }
}

fn budgeted(g: &OGoal, r: &mut rand_chacha::ChaCha8Rng) -> GoalStructure<NullState> {
    let s = match g {
        OGoal::Leaf(i) => {
            let p = r.gen_range(0.05..0.6);
            let work = Action::new("work").on(move |s: &NullState| Some(Value::Bool(s.tick_rng(0).gen_bool(p))));
            Goal::new(
                format!("g{i}"),
                |v: &Value| v.as_bool() == Some(true),
                tactic::lift(work),
            )
            .unwrap()
            .lift()
        }
        OGoal::Seq(c) => goal::seq(c.iter().map(|c| budgeted(c, r)).collect()),
        OGoal::First(c) => goal::first_of(c.iter().map(|c| budgeted(c, r)).collect()),
        OGoal::Repeat(c, _) => goal::repeat(budgeted(c, r)),
    };
    let b = random_bmax(r);
    s.with_bmax(b)
}

fn budget_safety() -> Verdict {
    let mut r = rng(5);
    let mut ticks = 0;
    let mut exhausted_ticks = 0;
    for case in 0..500 {
        let g = gen_goal(&mut r, 3, 8);
        let structure = budgeted(&g, &mut r);
        let beta0 = if r.gen_bool(0.2) {
            Budget::Unbounded
        } else {
            Budget::Finite(r.gen_range(1..=40))
        };
        let mut agent = Agent::new("A", NullEnvironment, ())
            .with_seed(case)
            .with_budget(beta0)
            .with_goal(structure)
            .map_err(|e| e.to_string())?;
        for _ in 0..300 {
            if agent.is_done() {
                break;
            }
            let rep = agent.tick();
            ticks += 1;
            if rep.outcome == TickOutcome::Exhausted {
                exhausted_ticks += 1;
            }
            let tree = agent.goals().unwrap();
            tree.check_invariants().map_err(|e| format!("case {case}: {e}"))?;
            // the current leaf holds no more than any current ancestor, so it
            // is the first node to run dry
            let path = tree.path_budgets();
            if let Some(&(_, leaf)) = path.last() {
                ensure!(
                    path.iter().all(|&(_, b)| leaf <= b),
                    "case {case}: leaf budget {leaf} above an ancestor in {path:?}"
                );
            }
        }
        let tree = agent.goals().unwrap();
        for a in tree.ledger().allocations() {
            ensure!(
                a.allocated <= a.parent_remaining,
                "case {case}: allocation {} above parent remaining {}",
                a.allocated,
                a.parent_remaining
            );
        }
        let cap = tree.bmax(tree.root()).min(beta0);
        let consumed = tree.ledger().consumed();
        ensure!(
            Budget::Finite(consumed) <= cap,
            "case {case}: consumed {consumed} exceeds {cap}"
        );
    }
    Ok(format!("500 runs, {ticks} ticks, {exhausted_ticks} exhaustion ticks"))
}

// 6 ------------------------------------------------------------------

type Log = Rc<RefCell<Vec<String>>>;
type ScriptState = AgentState<ScriptedEnvironment<i64>>;

fn loop_conformance() -> Verdict {
    let log: Log = Rc::default();
    let env = {
        let l = log.clone();
        ScriptedEnvironment::new(0)
            .then(|v| *v += 1)
            .idle()
            .then(|v| *v += 1)
            .with_observer(move |e| l.borrow_mut().push(e.to_string()))
    };
    let logged = |id: &'static str, log: &Log, guard: fn(i64) -> bool| {
        let (lg, le) = (log.clone(), log.clone());
        Action::<ScriptState>::new(id)
            .on(move |s: &ScriptState| {
                lg.borrow_mut().push(format!("guard:{id}"));
                guard(*s.env.snapshot()).then(|| Value::Int(*s.env.snapshot()))
            })
            .does(move |_, w| {
                le.borrow_mut().push(format!("exec:{id}"));
                Some(if id == "b" { Value::Int(100) } else { w.clone() })
            })
    };
    let t = tactic::seq(vec![
        tactic::lift(logged("a", &log, |_| true)),
        tactic::lift(logged("b", &log, |v| v >= 2)),
    ]);
    let g = Goal::new("g", |v: &Value| v.as_int() == Some(100), t).unwrap();
    let structure = goal::seq(vec![goal::first_of(vec![g.lift().with_bmax(5)]).with_bmax(10)]).with_bmax(20);
    let mut agent = Agent::new("A", env, ()).with_budget(50).with_goal(structure).unwrap();
    let mut outcomes = Vec::new();
    let mut cursors = Vec::new();
    let mut deductions = 0;
    for tick in 1..=3 {
        log.borrow_mut().clear();
        let rep = agent.tick();
        let entries = log.borrow().clone();
        ensure!(
            entries.first().map(String::as_str) == Some("refresh"),
            "tick {tick}: {entries:?} does not start with refresh"
        );
        let execs = entries.iter().filter(|e| e.starts_with("exec:")).count();
        let expect = usize::from(rep.outcome.executed().is_some());
        ensure!(execs == expect, "tick {tick}: {execs} actions executed in {entries:?}");
        if let Some(first_guard) = entries.iter().position(|e| e.starts_with("guard:")) {
            ensure!(first_guard > 0, "tick {tick}: guard before refresh");
        }
        ensure!(rep.path_before.len() == 3, "tick {tick}: expected three current nodes");
        for (before, after) in rep.path_before.iter().zip(&rep.path_after) {
            ensure!(
                after.1 == before.1.minus(rep.cost),
                "tick {tick}: node {:?} went {} -> {} for cost {}",
                before.0,
                before.1,
                after.1,
                rep.cost
            );
            deductions += usize::from(rep.cost > 0);
        }
        outcomes.push(rep.outcome.label());
        cursors.push(rep.cursor.clone());
    }
    ensure!(outcomes == ["a", "SLEPT", "b"], "outcomes {outcomes:?}");
    ensure!(cursors[1] == cursors[2], "sleeping moved the cursor: {cursors:?}");
    ensure!(agent.is_done(), "goal not solved");

    let mut identical = 0;
    for scenario in [
        Scenario::GomokuTacticVsDumb,
        Scenario::GoalStructureDemo,
        Scenario::MessagingDemo,
    ] {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut traces = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("trace{i}.jsonl"));
            let cfg = RunConfig {
                scenario,
                seed: 7,
                max_ticks: 10_000,
                board_size: 8,
                budget: Budget::Unbounded,
                bmax: Vec::new(),
                games: 2,
                trace_out: Some(path.clone()),
            };
            run_scenario(&cfg, &mut Vec::new()).map_err(|e| e.to_string())?;
            traces.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure!(!traces[0].is_empty(), "{}: empty trace", scenario.name());
        ensure!(
            traces[0] == traces[1],
            "{}: traces differ between runs",
            scenario.name()
        );
        identical += 1;
    }
    Ok(format!(
        "3 instrumented ticks, {deductions} ancestor deductions, {identical} scenarios replayed byte-identically"
    ))
}

// 7 ------------------------------------------------------------------

fn gen_term(r: &mut rand_chacha::ChaCha8Rng, depth: usize) -> Term {
    match r.gen_range(0..if depth == 0 { 3 } else { 5 }) {
        0 => Term::var(["X", "Y", "Z", "W"][r.gen_range(0..4)]),
        1 => Term::sym(["a", "b"][r.gen_range(0..2)]),
        2 => Term::int(r.gen_range(0..3)),
        3 => Term::app("f", vec![gen_term(r, depth - 1)]),
        _ => Term::app("g", vec![gen_term(r, depth - 1), gen_term(r, depth - 1)]),
    }
}

/// Rename variables in order of first occurrence.
fn canonical(t: &Term, names: &mut Vec<String>) -> Term {
    match t {
        Term::Var(v) => {
            let i = names.iter().position(|n| n == v).unwrap_or_else(|| {
                names.push(v.clone());
                names.len() - 1
            });
            Term::var(format!("_V{i}"))
        }
        Term::Compound(f, args) => Term::app(f.clone(), args.iter().map(|a| canonical(a, names)).collect()),
        other => other.clone(),
    }
}

fn contains_var(t: &Term, v: &str) -> bool {
    match t {
        Term::Var(x) => x == v,
        Term::Compound(_, args) => args.iter().any(|a| contains_var(a, v)),
        _ => false,
    }
}

fn unification_laws(r: &mut rand_chacha::ChaCha8Rng) -> Result<usize, String> {
    let empty = Bindings::new();
    let mut unified = 0;
    for _ in 0..3000 {
        let (a, b) = (gen_term(r, 3), gen_term(r, 3));
        let ab = unify(&a, &b, &empty);
        let ba = unify(&b, &a, &empty);
        ensure!(ab.is_some() == ba.is_some(), "symmetry: {a} vs {b}");
        if let (Some(s1), Some(s2)) = (ab, ba) {
            unified += 1;
            let (u1, u2) = (s1.resolve(&a), s2.resolve(&a));
            ensure!(u1 == s1.resolve(&b), "mgu does not unify {a} and {b}");
            ensure!(s1.resolve(&u1) == u1, "mgu not idempotent on {a}");
            let idem = s1.resolved();
            ensure!(
                idem.resolve(&idem.resolve(&a)) == idem.resolve(&a),
                "resolved() not idempotent on {a}"
            );
            ensure!(
                canonical(&u1, &mut Vec::new()) == canonical(&u2, &mut Vec::new()),
                "unifiers of {a}, {b} in either order are not variants: {u1} vs {u2}"
            );
        }
        let v = ["X", "Y", "Z", "W"][r.gen_range(0..4)];
        let t = gen_term(r, 3);
        if contains_var(&t, v) && t != Term::var(v) {
            ensure!(
                unify(&Term::var(v), &t, &empty).is_none(),
                "occurs check missed {v} in {t}"
            );
        }
    }
    let x = Term::var("X");
    ensure!(
        unify(&x, &Term::app("f", vec![x.clone()]), &empty).is_none(),
        "X = f(X) unified"
    );
    Ok(unified)
}

fn random_kbs(r: &mut rand_chacha::ChaCha8Rng) -> Result<usize, String> {
    let mut queries = 0;
    let mut kbs = 0;
    while kbs < 500 {
        let prog = Program::generate(r);
        let model = prog.model();
        if model.len() > 200 {
            continue;
        }
        kbs += 1;
        let mut kb = KnowledgeBase::new();
        let clauses = parse_program(&prog.text()).map_err(|e| format!("{e}\n{}", prog.text()))?;
        kb.add_all(clauses).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let p = r.gen_range(0..prog.arity.len());
            let q = Atom {
                pred: p,
                args: (0..prog.arity[p])
                    .map(|_| {
                        if r.gen_bool(0.6) {
                            Arg::Var(r.gen_range(0..2))
                        } else {
                            Arg::Const(r.gen_range(0..DOMAIN.len()))
                        }
                    })
                    .collect(),
            };
            let text = atom_text(&q);
            let term = bdi_tactics::logic::parse_term(&text).map_err(|e| e.to_string())?;
            let answer = kb.query(&term).map_err(|e| format!("{text}: {e}\n{}", prog.text()))?;
            let expected = model.iter().any(|f| matches(&q, f));
            match answer {
                Some(b) => {
                    let ground = b.resolve(&term);
                    ensure!(ground.is_ground(), "{text}: witness {ground} not ground");
                    let args = match &ground {
                        Term::Compound(_, args) => args
                            .iter()
                            .map(|a| DOMAIN.iter().position(|d| a.to_string() == *d).unwrap())
                            .collect(),
                        _ => Vec::new(),
                    };
                    ensure!(
                        model.contains(&(p, args)),
                        "{text}: witness {ground} not in the model\n{}",
                        prog.text()
                    );
                }
                None => ensure!(!expected, "{text}: no answer but the model has one\n{}", prog.text()),
            }
            queries += 1;
        }
    }
    Ok(queries)
}

fn logic_engine() -> Verdict {
    let start = Instant::now();
    let mut r = rng(7);
    let unified = unification_laws(&mut r)?;
    let queries = random_kbs(&mut r)?;
    let mut beliefs = GomokuBeliefs::with_logic(Piece::Cross);
    let mut with_wins = 0;
    for case in 0..10_000 {
        let board = random_board(&mut r, 8);
        let g = grid(&board);
        beliefs.load_board(&board);
        let kb = beliefs.kb.as_ref().unwrap();
        for (predicate, piece) in [(WIN_PREDICATE, Piece::Cross), (THREAT_PREDICATE, Piece::Circle)] {
            let want = oracle_winning_squares(&g, piece);
            let scanned: BTreeSet<(i64, i64)> = winning_squares(&board, piece)
                .into_iter()
                .map(|s| (s.x as i64, s.y as i64))
                .collect();
            ensure!(
                scanned == want,
                "case {case}: scanner {scanned:?} vs oracle {want:?}\n{board}"
            );
            let answer = kb.query(&pred(predicate, ["X", "Y"])).map_err(|e| e.to_string())?;
            match answer {
                Some(b) => {
                    let sq = (b.int("X").unwrap(), b.int("Y").unwrap());
                    ensure!(
                        want.contains(&sq),
                        "case {case}: {predicate} gave {sq:?}, oracle {want:?}\n{board}"
                    );
                    with_wins += 1;
                }
                None => ensure!(
                    want.is_empty(),
                    "case {case}: {predicate} found nothing, oracle {want:?}\n{board}"
                ),
            }
        }
    }
    let t = within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{unified} unifiable pairs, 500 KBs / {queries} queries, 10000 boards ({with_wins} positive queries), {t}"
    ))
}

// 8 ------------------------------------------------------------------

fn gomoku_end_to_end() -> Verdict {
    let mut r = rng(8);
    for case in 0..10_000 {
        let board = random_board(&mut r, 8);
        let g = grid(&board);
        ensure!(
            board.cross_win() == five_anywhere(&g, Piece::Cross)
                && board.circle_win() == five_anywhere(&g, Piece::Circle),
            "case {case}: win detection disagrees with the scanner\n{board}"
        );
    }
    let start = Instant::now();
    let mut wins = 0;
    for seed in 0..100 {
        let result = play_game(&GameConfig {
            seed,
            ..GameConfig::default()
        })
        .map_err(|e| e.to_string())?;
        wins += usize::from(result.winner == Some(Piece::Cross));
    }
    let tournament = within(start, Duration::from_secs(60))?;
    let mut max_plies = 0;
    for seed in 0..100 {
        let cfg = GameConfig {
            seed,
            cross: Player::Dumb,
            circle: Player::Dumb,
            ..GameConfig::default()
        };
        let result = play_game(&cfg).map_err(|e| e.to_string())?;
        ensure!(
            result.board.is_over() && result.plies <= 64,
            "seed {seed}: dumb game did not finish in 64 plies"
        );
        max_plies = max_plies.max(result.plies);
    }
    ensure!(wins >= 90, "tactic agent won {wins}/100");
    Ok(format!(
        "10000 boards agree, tactic won {wins}/100 in {tournament}, dumb games at most {max_plies} plies"
    ))
}

// 9 ------------------------------------------------------------------

fn messaging() -> Verdict {
    let cfg = RunConfig {
        scenario: Scenario::MessagingDemo,
        seed: 0,
        max_ticks: 100,
        board_size: 8,
        budget: Budget::Unbounded,
        bmax: Vec::new(),
        games: 1,
        trace_out: None,
    };
    let out = execute(&cfg).map_err(|e| e.to_string())?;
    let s = &out.summaries[0];
    ensure!(s.status == "SOLVED", "messaging demo ended {}", s.status);
    ensure!(
        s.delivered == s.fanout && s.delivered.is_some(),
        "delivered {:?} vs fan-out sum {:?}",
        s.delivered,
        s.fanout
    );
    let woken: Vec<(String, u64)> = out
        .reports
        .iter()
        .filter(|r| r.agent != "hub" && r.wake == Wake::Message && r.tick % 10 != 0)
        .map(|r| (r.agent.clone(), r.tick))
        .collect();
    ensure!(!woken.is_empty(), "no sleeping agent woke on a message");

    // random traffic over one node
    let mut r = rng(9);
    let node = ComNode::new();
    let ids = ["p0", "p1", "p2", "p3", "p4"];
    let roles = ["even", "odd", "even", "odd", "even"];
    let inboxes: Vec<Inbox> = ids.iter().map(|_| Inbox::default()).collect();
    for i in 0..ids.len() {
        node.register(ids[i], roles[i], inboxes[i].clone()).unwrap();
    }
    let mut expected = 0u64;
    let mut fanout_sum = 0u64;
    for seq in 0..500i64 {
        let from = r.gen_range(0..ids.len());
        let (to, count) = match r.gen_range(0..3) {
            0 => {
                let j = r.gen_range(0..ids.len());
                (Addressing::Singlecast(ids[j].to_string()), 1)
            }
            1 => (Addressing::Broadcast, ids.len() - 1),
            _ => {
                let role = roles[r.gen_range(0..ids.len())];
                let n = (0..ids.len()).filter(|&k| roles[k] == role && k != from).count();
                (Addressing::Rolecast(role.to_string()), n)
            }
        };
        let msg = Message {
            sender: ids[from].to_string(),
            to,
            payload: Value::Int(seq),
            timestamp: seq as u64,
        };
        let n = node.send(msg).map_err(|e| e.to_string())?;
        ensure!(n == count, "fan-out {n}, expected {count}");
        expected += count as u64;
        fanout_sum += n as u64;
    }
    ensure!(
        node.delivered() == expected && fanout_sum == expected,
        "delivered {} vs {expected}",
        node.delivered()
    );
    for (k, inbox) in inboxes.iter().enumerate() {
        let got = inbox.drain();
        for sender in ids {
            let seqs: Vec<i64> = got
                .iter()
                .filter(|m| m.sender == sender)
                .filter_map(|m| m.payload.as_int())
                .collect();
            ensure!(
                seqs.windows(2).all(|w| w[0] < w[1]),
                "{sender} -> {} out of order: {seqs:?}",
                ids[k]
            );
        }
    }
    Ok(format!(
        "demo delivered {} = fan-out sum, {} early wakes, 500 random sends FIFO per pair",
        s.delivered.unwrap(),
        woken.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("tactic semantics oracle", tactic_oracle),
        ("definition fixtures", definition_fixtures),
        ("goal algebra oracle", goal_oracle),
        ("rewrite exactness", rewrites),
        ("budget safety", budget_safety),
        ("deliberation loop conformance", loop_conformance),
        ("logic engine", logic_engine),
        ("end-to-end gomoku", gomoku_end_to_end),
        ("messaging", messaging),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
