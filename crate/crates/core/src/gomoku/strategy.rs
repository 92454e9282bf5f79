//! The tactic and the staged goal structure of the tactic-playing agent.

use crate::action::Action;
use crate::budget::Budget;
use crate::goal::{self, Goal, GoalStructure};
use crate::tactic::{any_of, first_of, lift, Tactic};
use crate::value::Value;

use super::actions::{cluster, defend, dumb, extend, win1};
use super::env::GomokuState;

/// Win if possible, else block, else make one of two constructive moves.
pub fn win_block_or_build(alpha1: Action<GomokuState>, alpha2: Action<GomokuState>) -> Tactic<GomokuState> {
    first_of(vec![
        lift(win1()),
        lift(defend()),
        any_of(vec![lift(alpha1), lift(alpha2)]),
    ])
}

pub fn standard_tactic() -> Tactic<GomokuState> {
    win_block_or_build(extend(), cluster())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StrategyConfig {
    /// Cap on the REPEAT around the nucleus/attack stages.
    pub repeat_bmax: Budget,
    /// Cap on the attack stage before it is abandoned for a new nucleus.
    pub attack_bmax: Budget,
    /// Own pieces needed inside one 3×3 window for a nucleus.
    pub nucleus_k: usize,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            repeat_bmax: Budget::Unbounded,
            attack_bmax: Budget::Finite(6),
            nucleus_k: 3,
        }
    }
}

fn int(v: &Value, key: &str) -> i64 {
    v.get(key).and_then(Value::as_int).unwrap_or(0)
}

/// G1: a nucleus of pieces.
pub fn nucleus_goal(k: usize) -> Goal<GomokuState> {
    Goal::new("G1", move |v| int(v, "window") >= k as i64, standard_tactic()).expect("valid tactic")
}

/// G2: two winning squares at once, which one reply cannot both block.
pub fn attack_goal() -> Goal<GomokuState> {
    Goal::new("G2", |v| v.flag("win") || int(v, "threats") >= 2, standard_tactic()).expect("valid tactic")
}

/// G3: five in a row.
pub fn finish_goal() -> Goal<GomokuState> {
    Goal::new("G3", |v| v.flag("win"), standard_tactic()).expect("valid tactic")
}

/// SEQ(REPEAT(SEQ(G1, G2)), G3), with the REPEAT labelled `R`.
pub fn gomoku_goal(cfg: StrategyConfig) -> GoalStructure<GomokuState> {
    goal::seq(vec![
        goal::repeat(goal::seq(vec![
            nucleus_goal(cfg.nucleus_k).lift(),
            attack_goal().lift().with_bmax(cfg.attack_bmax),
        ]))
        .with_bmax(cfg.repeat_bmax)
        .named("R"),
        finish_goal().lift(),
    ])
}

/// A single goal pursued with random moves only.
pub fn dumb_goal() -> GoalStructure<GomokuState> {
    Goal::new("win", |v| v.flag("win"), lift(dumb()))
        .expect("valid tactic")
        .lift()
}
