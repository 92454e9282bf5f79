//! Command-line scenarios.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::action::Action;
use crate::budget::Budget;
use crate::environment::NullEnvironment;
use crate::goal::{self, Goal, GoalStatus, GoalStructure};
use crate::gomoku::game::{play_game, GameConfig, Player};
use crate::gomoku::strategy::{gomoku_goal, StrategyConfig};
use crate::gomoku::Piece;
use crate::runtime::harness::Harness;
use crate::runtime::messaging::{Addressing, ComNode};
use crate::runtime::{trace, Agent, RunStatus, TickReport};
use crate::state::{AgentState, Beliefs};
use crate::tactic::{lift, seq};
use crate::value::Value;

use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    GomokuDumbVsDumb,
    GomokuTacticVsDumb,
    GoalStructureDemo,
    MessagingDemo,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::GomokuDumbVsDumb => "gomoku-dumb-vs-dumb",
            Scenario::GomokuTacticVsDumb => "gomoku-tactic-vs-dumb",
            Scenario::GoalStructureDemo => "goal-structure-demo",
            Scenario::MessagingDemo => "messaging-demo",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "bdi-tactics", about = "Run packaged agent scenarios and write their traces")]
pub struct Cli {
    #[arg(long, value_enum)]
    pub scenario: Scenario,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_ticks: u64,
    #[arg(long, default_value_t = 8)]
    pub board_size: usize,
    /// Initial budget per agent: a non-negative integer or `inf`.
    #[arg(long, default_value = "inf", value_parser = parse_budget)]
    pub budget: Budget,
    /// Per-node cap, `NODE=N` with N an integer or `inf`; repeatable.
    #[arg(long = "bmax", value_parser = parse_bmax)]
    pub bmax: Vec<(String, Budget)>,
    #[arg(long, default_value_t = 1)]
    pub games: u64,
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
}

pub fn parse_budget(s: &str) -> Result<Budget, String> {
    match s {
        "inf" | "unbounded" => Ok(Budget::Unbounded),
        _ => match s.parse::<i64>() {
            Ok(n) if n >= 0 => Ok(Budget::Finite(n)),
            _ => Err(format!("`{s}` is not a budget (non-negative integer or `inf`)")),
        },
    }
}

fn parse_bmax(s: &str) -> Result<(String, Budget), String> {
    let (node, value) = s.split_once('=').ok_or_else(|| format!("`{s}` is not NODE=N"))?;
    if node.is_empty() {
        return Err(format!("`{s}` has an empty node name"));
    }
    Ok((node.to_string(), parse_budget(value)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub seed: u64,
    pub max_ticks: u64,
    pub board_size: usize,
    pub budget: Budget,
    pub bmax: Vec<(String, Budget)>,
    pub games: u64,
    pub trace_out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl TryFrom<Cli> for RunConfig {
    type Error = CliError;

    fn try_from(c: Cli) -> Result<Self, CliError> {
        if c.board_size == 0 {
            return Err(CliError::Usage("--board-size must be at least 1".into()));
        }
        if c.games == 0 {
            return Err(CliError::Usage("--games must be at least 1".into()));
        }
        Ok(RunConfig {
            scenario: c.scenario,
            seed: c.seed,
            max_ticks: c.max_ticks,
            board_size: c.board_size,
            budget: c.budget,
            bmax: c.bmax,
            games: c.games,
            trace_out: c.trace_out,
        })
    }
}

/// One machine-readable line per run.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub scenario: &'static str,
    pub seed: u64,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub plies: Option<usize>,
    pub ticks: u64,
    pub consumed: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sends: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delivered: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fanout: Option<u64>,
}

impl Summary {
    fn new(scenario: Scenario, seed: u64, status: impl Into<String>) -> Self {
        Summary {
            scenario: scenario.name(),
            seed,
            status: status.into(),
            winner: None,
            plies: None,
            ticks: 0,
            consumed: 0,
            sends: None,
            delivered: None,
            fanout: None,
        }
    }
}

pub struct Outcome {
    pub summaries: Vec<Summary>,
    pub reports: Vec<TickReport>,
}

fn apply_overrides<S>(
    mut structure: GoalStructure<S>,
    overrides: &[(String, Budget)],
) -> Result<GoalStructure<S>, CliError> {
    for (node, b) in overrides {
        if structure.override_bmax(node, *b) == 0 {
            return Err(CliError::Usage(format!("no goal structure node named `{node}`")));
        }
    }
    Ok(structure)
}

fn status_name(s: RunStatus) -> &'static str {
    match s {
        RunStatus::Solved => "SOLVED",
        RunStatus::Failed => "FAILED",
        RunStatus::Timeout => "TIMEOUT",
        RunStatus::NoGoal => "NOGOAL",
    }
}

fn run_games(cfg: &RunConfig, cross: Player) -> Result<Outcome, CliError> {
    if cross == Player::Tactic {
        apply_overrides(gomoku_goal(StrategyConfig::default()), &cfg.bmax)?;
    } else if !cfg.bmax.is_empty() {
        return Err(CliError::Usage("--bmax applies to the tactic agent only".into()));
    }
    let mut summaries = Vec::new();
    let mut reports = Vec::new();
    for i in 0..cfg.games {
        let seed = cfg.seed.wrapping_add(i);
        let game = GameConfig {
            size: cfg.board_size,
            seed,
            max_ticks: cfg.max_ticks,
            cross,
            circle: Player::Dumb,
            budget: cfg.budget,
            strategy: StrategyConfig::default(),
            bmax: cfg.bmax.clone(),
        };
        let result = play_game(&game).map_err(|e| CliError::Usage(e.to_string()))?;
        let status = if result.board.is_over() { "FINISHED" } else { "TIMEOUT" };
        let mut s = Summary::new(cfg.scenario, seed, status);
        s.winner = Some(result.winner.map_or("draw", Piece::name).to_string());
        s.plies = Some(result.plies);
        s.ticks = result.ticks;
        s.consumed = result.consumed[0] + result.consumed[1];
        summaries.push(s);
        reports.extend(result.reports);
    }
    Ok(Outcome { summaries, reports })
}

/// Rolls a die each tick; the stages ask for ever luckier rolls.
fn goal_structure_demo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    type St = AgentState<NullEnvironment>;
    let roll = || {
        Action::<St>::new("roll")
            .on(|s: &St| Some(Value::Int(s.tick_rng(0).gen_range(1..=6))))
            .does(|_, r| Some(r.clone()))
    };
    let at_least = |name: &str, n: i64| {
        Goal::new(name, move |v: &Value| v.as_int().is_some_and(|r| r >= n), lift(roll())).expect("valid tactic")
    };
    let structure = goal::seq(vec![
        goal::repeat(goal::seq(vec![
            at_least("G1", 3).lift(),
            at_least("G2", 6).lift().with_bmax(2),
        ]))
        .named("R"),
        at_least("G3", 5).lift(),
    ]);
    let structure = apply_overrides(structure, &cfg.bmax)?;
    let mut agent = Agent::new("demo", NullEnvironment, ())
        .with_seed(cfg.seed)
        .with_budget(cfg.budget)
        .with_goal(structure)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let run = agent.run(cfg.max_ticks);
    let mut s = Summary::new(cfg.scenario, cfg.seed, status_name(run.status));
    s.ticks = run.ticks.len() as u64;
    s.consumed = run.consumed;
    Ok(Outcome {
        summaries: vec![s],
        reports: run.ticks,
    })
}

/// Messages read so far.
#[derive(Default)]
pub struct Mailbag {
    pub read: i64,
}

impl<E> Beliefs<E> for Mailbag {}

/// A hub sends one broadcast, one singlecast and one rolecast; workers
/// that tick only every tenth step wake up for each message.
fn messaging_demo(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if !cfg.bmax.is_empty() {
        return Err(CliError::Usage("--bmax does not apply to messaging-demo".into()));
    }
    type St = AgentState<NullEnvironment, Mailbag>;
    let node = ComNode::new();
    let send_at = |id: &str, step: i64, to: Addressing| {
        Action::<St>::new(id)
            .on_when(move |s: &St| s.clock() >= 2 * step as u64)
            .try_does(move |s, _| {
                let n = s.send(to.clone(), Value::from("ping")).map_err(|e| e.to_string())?;
                Ok(Some(Value::map([
                    ("step", Value::Int(step)),
                    ("fanout", Value::Int(n as i64)),
                ])))
            })
    };
    let hub_tactic = seq(vec![
        lift(send_at("broadcast", 1, Addressing::Broadcast)),
        lift(send_at("singlecast", 2, Addressing::Singlecast("w1".into()))),
        lift(send_at("rolecast", 3, Addressing::Rolecast("worker".into()))),
    ]);
    let hub_goal = Goal::new(
        "notify",
        |v: &Value| v.get("step").and_then(Value::as_int) == Some(3),
        hub_tactic,
    )
    .expect("valid tactic");
    let mut hub = Agent::new("hub", NullEnvironment, Mailbag::default())
        .with_role("coordinator")
        .with_seed(cfg.seed)
        .with_budget(cfg.budget)
        .with_goal(hub_goal.lift())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    hub.register(&node).map_err(|e| CliError::Usage(e.to_string()))?;

    let reader = |expect: i64| {
        let read = Action::<St>::new("read")
            .on_when(|s: &St| !s.inbox().is_empty())
            .does(|s, _| {
                s.beliefs.read += s.inbox().drain().len() as i64;
                Some(Value::Int(s.beliefs.read))
            });
        Goal::new(
            "inbox",
            move |v: &Value| v.as_int().is_some_and(|n| n >= expect),
            lift(read),
        )
        .expect("valid tactic")
    };
    let mut others = Vec::new();
    for (id, role, expect) in [("w1", "worker", 3), ("w2", "worker", 2), ("log", "monitor", 1)] {
        let mut a = Agent::new(id, NullEnvironment, Mailbag::default())
            .with_role(role)
            .with_seed(cfg.seed)
            .with_budget(cfg.budget)
            .with_interval(10)
            .with_goal(reader(expect).lift())
            .map_err(|e| CliError::Usage(e.to_string()))?;
        a.register(&node).map_err(|e| CliError::Usage(e.to_string()))?;
        others.push(a);
    }
    let reports = {
        let mut h = Harness::new();
        h.add(&mut hub);
        for a in others.iter_mut() {
            h.add(a);
        }
        h.run(cfg.max_ticks, |_| false)
    };
    let all_solved = std::iter::once(&hub)
        .chain(others.iter())
        .all(|a| a.goals().is_some_and(|t| t.status(t.root()) == GoalStatus::Solved));
    let fanout: u64 = reports
        .iter()
        .filter(|r| r.agent == "hub")
        .filter_map(|r| r.proposal.as_ref()?.get("fanout")?.as_int())
        .map(|n| n as u64)
        .sum();
    let mut s = Summary::new(cfg.scenario, cfg.seed, if all_solved { "SOLVED" } else { "TIMEOUT" });
    s.ticks = reports.last().map_or(0, |r| r.tick);
    s.consumed = std::iter::once(&hub)
        .chain(others.iter())
        .filter_map(|a| a.goals().map(|t| t.ledger().consumed()))
        .sum();
    s.sends = Some(node.sends());
    s.delivered = Some(node.delivered());
    s.fanout = Some(fanout);
    Ok(Outcome {
        summaries: vec![s],
        reports,
    })
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.scenario {
        Scenario::GomokuDumbVsDumb => run_games(cfg, Player::Dumb),
        Scenario::GomokuTacticVsDumb => run_games(cfg, Player::Tactic),
        Scenario::GoalStructureDemo => goal_structure_demo(cfg),
        Scenario::MessagingDemo => messaging_demo(cfg),
    }
}

/// Per-game rows and the totals line.
pub fn tournament_table(summaries: &[Summary]) -> String {
    let mut out = String::from("game  seed  winner  plies  ticks\n");
    let mut wins = [0usize; 3];
    for (i, s) in summaries.iter().enumerate() {
        let w = s.winner.as_deref().unwrap_or("-");
        wins[match w {
            "cross" => 0,
            "circle" => 1,
            _ => 2,
        }] += 1;
        out.push_str(&format!(
            "{:>4}  {:>4}  {:>6}  {:>5}  {:>5}\n",
            i,
            s.seed,
            w,
            s.plies.unwrap_or(0),
            s.ticks
        ));
    }
    let n = summaries.len().max(1) as f64;
    out.push_str(&format!(
        "total: cross {} circle {} draw {} cross-win-rate {:.2}\n",
        wins[0],
        wins[1],
        wins[2],
        wins[0] as f64 / n
    ));
    out
}

/// Run the configured scenario, write its trace, print summaries to `out`.
pub fn run_scenario(cfg: &RunConfig, out: &mut impl Write) -> Result<Outcome, CliError> {
    let outcome = execute(cfg)?;
    if let Some(path) = &cfg.trace_out {
        let mut w = BufWriter::new(File::create(path)?);
        trace::write_all(&mut w, &outcome.reports)?;
        w.flush()?;
    }
    for s in &outcome.summaries {
        writeln!(out, "{}", serde_json::to_string(s).map_err(io::Error::other)?)?;
    }
    if matches!(cfg.scenario, Scenario::GomokuDumbVsDumb | Scenario::GomokuTacticVsDumb) {
        write!(out, "{}", tournament_table(&outcome.summaries))?;
    }
    Ok(outcome)
}
