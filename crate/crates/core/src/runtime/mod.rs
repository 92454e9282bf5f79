//! Agents and their deliberation cycle.
//!
//! One call to [`Agent::tick`] runs one iteration of the sense-reason-act
//! loop:
//!
//! 1. if the current goal's budget is gone, fail it and pick the next goal;
//! 2. otherwise refresh the environment, collect `first(cursor, state)`;
//! 3. sleep if nothing is enabled, else choose one candidate and execute it;
//! 4. charge its cost to the goal and all current ancestors;
//! 5. if the proposal solves the goal, mark it solved and adopt the next
//!    goal, otherwise move the cursor to `next(action)`.

pub mod harness;
pub mod messaging;
pub mod trace;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::budget::Budget;
use crate::environment::Environment;
use crate::goal::{GoalEdit, GoalError, GoalEvent, GoalNodeId, GoalStatus, GoalStructure, GoalTree};
use crate::state::{AgentState, Beliefs};
use crate::tactic::{Candidate, TacticNodeId};
use crate::value::Value;

use self::messaging::{ComNode, RegistrationError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("cannot choose from an empty candidate set")]
    EmptyCandidates,
    #[error(transparent)]
    Goal(#[from] GoalError),
    #[error(transparent)]
    Registration(#[from] RegistrationError),
}

/// Picks which enabled action runs this tick.
pub trait SelectionPolicy {
    /// Index into `candidates`, which is never empty.
    fn select(&mut self, candidates: &[&str], rng: &mut ChaCha8Rng) -> usize;
}

/// Uniformly random choice; the default.
#[derive(Debug, Default, Clone, Copy)]
pub struct UniformRandom;

impl SelectionPolicy for UniformRandom {
    fn select(&mut self, candidates: &[&str], rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(0..candidates.len())
    }
}

/// Always the first candidate in leaf order.
#[derive(Debug, Default, Clone, Copy)]
pub struct FirstCandidate;

impl SelectionPolicy for FirstCandidate {
    fn select(&mut self, _candidates: &[&str], _rng: &mut ChaCha8Rng) -> usize {
        0
    }
}

/// Uniform choice over a non-empty slice.
pub fn choose<'a, T>(candidates: &'a [T], rng: &mut impl Rng) -> Result<&'a T, RuntimeError> {
    if candidates.is_empty() {
        return Err(RuntimeError::EmptyCandidates);
    }
    Ok(&candidates[rng.gen_range(0..candidates.len())])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Wake {
    /// Regular scheduled tick.
    Tick,
    /// Woken early by an incoming message.
    Message,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TickOutcome {
    Executed(String),
    /// No candidate was enabled; the cursor stays where it is.
    Slept,
    /// The current goal ran out of budget and was failed.
    Exhausted,
    /// The effect of the chosen action failed; the tick is consumed.
    EffectFailed(String),
    /// No goal to work on.
    Idle,
}

impl TickOutcome {
    pub fn executed(&self) -> Option<&str> {
        match self {
            TickOutcome::Executed(a) | TickOutcome::EffectFailed(a) => Some(a),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            TickOutcome::Executed(a) => a.clone(),
            TickOutcome::Slept => "SLEPT".into(),
            TickOutcome::Exhausted => "EXHAUSTED".into(),
            TickOutcome::EffectFailed(a) => format!("ERROR:{a}"),
            TickOutcome::Idle => "IDLE".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TickReport {
    pub tick: u64,
    pub agent: String,
    pub wake: Wake,
    /// Goal current when the tick started.
    pub goal: Option<String>,
    /// Cursor position (tactic path) when the tick started.
    pub cursor: Option<String>,
    pub outcome: TickOutcome,
    /// Ids of `first(cursor, state)`; empty when no selection took place.
    pub candidates: Vec<String>,
    pub proposal: Option<Value>,
    /// Current-path budgets before and after the deduction.
    pub path_before: Vec<(GoalNodeId, Budget)>,
    pub path_after: Vec<(GoalNodeId, Budget)>,
    pub cost: i64,
    pub budget_goal: Option<Budget>,
    pub budget_root: Option<Budget>,
    pub events: Vec<GoalEvent>,
    pub sensing_error: Option<String>,
    pub error: Option<String>,
}

impl TickReport {
    fn new(tick: u64, agent: &str, wake: Wake) -> Self {
        TickReport {
            tick,
            agent: agent.to_string(),
            wake,
            goal: None,
            cursor: None,
            outcome: TickOutcome::Idle,
            candidates: Vec::new(),
            proposal: None,
            path_before: Vec::new(),
            path_after: Vec::new(),
            cost: 0,
            budget_goal: None,
            budget_root: None,
            events: Vec::new(),
            sensing_error: None,
            error: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum RunStatus {
    Solved,
    Failed,
    Timeout,
    NoGoal,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub status: RunStatus,
    pub ticks: Vec<TickReport>,
    pub consumed: i64,
}

pub struct Agent<E, B = ()> {
    id: String,
    role: String,
    state: AgentState<E, B>,
    goals: Option<GoalTree<AgentState<E, B>>>,
    cursor: Option<TacticNodeId>,
    budget: Budget,
    rng: ChaCha8Rng,
    policy: Box<dyn SelectionPolicy>,
    interval: u64,
    clock: u64,
    seen_arrivals: u64,
}

impl<E: Environment, B: Beliefs<E>> Agent<E, B> {
    pub fn new(id: impl Into<String>, env: E, beliefs: B) -> Self {
        let id = id.into();
        Agent {
            state: AgentState::new(id.clone(), env, beliefs),
            id,
            role: String::new(),
            goals: None,
            cursor: None,
            budget: Budget::Unbounded,
            rng: ChaCha8Rng::seed_from_u64(0),
            policy: Box::new(UniformRandom),
            interval: 1,
            clock: 0,
            seen_arrivals: 0,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng = ChaCha8Rng::seed_from_u64(seed);
        self.state.set_seed(seed);
        self
    }

    pub fn with_role(mut self, role: impl Into<String>) -> Self {
        self.role = role.into();
        self
    }

    /// Initial budget β₀. May be set before or after the goal, as long as
    /// the agent has not run yet.
    pub fn with_budget(mut self, budget: impl Into<Budget>) -> Self {
        self.budget = budget.into();
        if let Some(tree) = self.goals.as_mut() {
            tree.restart_budget(self.budget);
        }
        self
    }

    pub fn with_goal(mut self, structure: GoalStructure<AgentState<E, B>>) -> Result<Self, RuntimeError> {
        self.set_goal(structure)?;
        Ok(self)
    }

    pub fn with_policy(mut self, policy: impl SelectionPolicy + 'static) -> Self {
        self.policy = Box::new(policy);
        self
    }

    /// Ticks between scheduled wake-ups when driven by a harness.
    pub fn with_interval(mut self, interval: u64) -> Self {
        assert!(interval >= 1);
        self.interval = interval;
        self
    }

    pub fn set_goal(&mut self, structure: GoalStructure<AgentState<E, B>>) -> Result<(), RuntimeError> {
        self.goals = Some(GoalTree::with_budget(structure, self.budget)?);
        self.cursor = None;
        Ok(())
    }

    /// Join a communication node under the agent's role.
    pub fn register(&mut self, node: &ComNode) -> Result<(), RuntimeError> {
        node.register(&self.id, &self.role, self.state.inbox().clone())?;
        self.state.attach(node.clone());
        Ok(())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn role(&self) -> &str {
        &self.role
    }

    pub fn interval(&self) -> u64 {
        self.interval
    }

    pub fn state(&self) -> &AgentState<E, B> {
        &self.state
    }

    pub fn state_mut(&mut self) -> &mut AgentState<E, B> {
        &mut self.state
    }

    pub fn goals(&self) -> Option<&GoalTree<AgentState<E, B>>> {
        self.goals.as_ref()
    }

    pub fn cursor(&self) -> Option<TacticNodeId> {
        self.cursor
    }

    pub fn is_done(&self) -> bool {
        self.goals.as_ref().is_none_or(GoalTree::is_done)
    }

    /// Messages arrived since the last tick started.
    pub fn has_new_messages(&self) -> bool {
        self.state.inbox().arrivals() > self.seen_arrivals
    }

    pub fn add_after(&mut self, structure: GoalStructure<AgentState<E, B>>) -> Result<Vec<GoalEvent>, RuntimeError> {
        let tree = self.goals.as_mut().ok_or(GoalError::NoCurrentGoal)?;
        let before = tree.current_leaf();
        let events = tree.add_after(structure)?;
        if tree.current_leaf() != before {
            self.cursor = None;
        }
        Ok(events)
    }

    pub fn add_before(
        &mut self,
        structure: GoalStructure<AgentState<E, B>>,
        repeat_bmax: Budget,
    ) -> Result<Vec<GoalEvent>, RuntimeError> {
        let tree = self.goals.as_mut().ok_or(GoalError::NoCurrentGoal)?;
        let events = tree.add_before(structure, repeat_bmax)?;
        self.cursor = None;
        Ok(events)
    }

    pub fn tick(&mut self) -> TickReport {
        self.tick_at(self.clock + 1, Wake::Tick)
    }

    /// Run one deliberation cycle stamped with global time `now`.
    pub fn tick_at(&mut self, now: u64, wake: Wake) -> TickReport {
        self.clock = now;
        self.seen_arrivals = self.state.inbox().arrivals();
        self.state.set_clock(now);
        let mut report = TickReport::new(now, &self.id, wake);

        let Some(tree) = self.goals.as_mut() else {
            return report;
        };
        let Some(leaf) = tree.current_leaf() else {
            return report;
        };
        let goal = tree.goal(leaf).expect("current leaf holds a goal").clone();
        let tactic = goal.tactic().clone();
        let cursor = self.cursor.unwrap_or_else(|| tactic.root());
        report.goal = Some(goal.name().to_string());
        report.cursor = Some(tactic.path_string(cursor));

        if tree.exhausted() {
            report.outcome = TickOutcome::Exhausted;
            report.path_before = tree.path_budgets();
            report.path_after = report.path_before.clone();
            fill_budgets(&mut report, tree, leaf);
            report.events = tree.mark_failed(leaf).expect("leaf is current");
            self.cursor = None;
            return report;
        }

        if let Err(e) = self.state.refresh() {
            report.sensing_error = Some(e.to_string());
        }

        let candidates: Vec<Candidate> = tactic.first(cursor, &self.state);
        report.candidates = candidates
            .iter()
            .map(|c| tactic.action(c.node).expect("candidate is a leaf").id().to_string())
            .collect();
        if candidates.is_empty() {
            report.outcome = TickOutcome::Slept;
            report.path_before = tree.path_budgets();
            report.path_after = report.path_before.clone();
            fill_budgets(&mut report, tree, leaf);
            return report;
        }

        let ids: Vec<&str> = report.candidates.iter().map(String::as_str).collect();
        let pick = self.policy.select(&ids, &mut self.rng);
        let chosen = &candidates[pick];
        let action = tactic.action(chosen.node).expect("candidate is a leaf");
        let result = action.execute_with(&mut self.state, &chosen.witness);

        report.cost = action.cost();
        report.path_before = tree.path_budgets();
        tree.deduct(action.cost());
        report.path_after = tree.path_budgets();
        fill_budgets(&mut report, tree, leaf);

        for edit in self.state.take_edits() {
            let applied = match edit {
                GoalEdit::After(h) => tree.add_after(h),
                GoalEdit::Before(h, bmax) => tree.add_before(h, bmax),
            };
            match applied {
                Ok(ev) => report.events.extend(ev),
                Err(e) => report.error = Some(e.to_string()),
            }
        }
        let leaf_moved = tree.current_leaf() != Some(leaf);

        match result {
            Err(e) => {
                report.outcome = TickOutcome::EffectFailed(action.id().to_string());
                report.error = Some(e.to_string());
                if leaf_moved {
                    self.cursor = None;
                }
            }
            Ok(proposal) => {
                report.outcome = TickOutcome::Executed(action.id().to_string());
                if leaf_moved {
                    self.cursor = None;
                } else if proposal.as_ref().is_some_and(|v| goal.evaluate(v)) {
                    report.events.extend(tree.mark_solved(leaf).expect("leaf is current"));
                    self.cursor = None;
                } else {
                    self.cursor = Some(tactic.next(chosen.node));
                }
                report.proposal = proposal;
            }
        }
        report
    }

    /// Tick until the goal structure is finished or `max_ticks` ticks ran.
    pub fn run(&mut self, max_ticks: u64) -> RunReport {
        let mut ticks = Vec::new();
        if self.goals.is_none() {
            return RunReport {
                status: RunStatus::NoGoal,
                ticks,
                consumed: 0,
            };
        }
        while (ticks.len() as u64) < max_ticks && !self.is_done() {
            ticks.push(self.tick());
        }
        let tree = self.goals.as_ref().expect("checked above");
        let status = match tree.status(tree.root()) {
            GoalStatus::Solved => RunStatus::Solved,
            GoalStatus::Failed => RunStatus::Failed,
            _ => RunStatus::Timeout,
        };
        RunReport {
            status,
            ticks,
            consumed: tree.ledger().consumed(),
        }
    }
}

fn fill_budgets<S>(report: &mut TickReport, tree: &GoalTree<S>, leaf: GoalNodeId) {
    report.budget_goal = tree.remaining(leaf);
    report.budget_root = tree.remaining(tree.root());
}
