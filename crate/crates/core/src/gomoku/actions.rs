//! GoMoku actions.
//!
//! Every move action proposes an observation of the board right after its
//! move:
//!
//! ```text
//! {at: (x,y), win: bool, window: <own pieces in the best 3×3 window>,
//!  threats: <squares where we could now win>}
//! ```
//!
//! Goals read whichever part they care about.

use rand::seq::SliceRandom;

use crate::action::Action;
use crate::logic::builder::pred;
use crate::value::Value;

use super::analysis::{line_score, max_window, neighbours, winning_squares};
use super::board::{Board, Piece, Square};
use super::env::{move_args, GomokuState, THREAT_PREDICATE, WIN_PREDICATE};

const SALT_DUMB: u64 = 1;
const SALT_EXTEND: u64 = 2;
const SALT_CLUSTER: u64 = 3;

pub fn observe(board: &Board, me: Piece, at: Square) -> Value {
    Value::map([
        ("at", Value::Pair(at.x as i64, at.y as i64)),
        ("win", Value::Bool(board.wins(me))),
        ("window", Value::Int(max_window(board, me) as i64)),
        ("threats", Value::Int(winning_squares(board, me).len() as i64)),
    ])
}

/// The agent's side is to move and the game is still on.
pub fn my_turn(s: &GomokuState) -> bool {
    let b = s.env.board();
    !b.is_over() && b.turn() == s.beliefs.me
}

fn square_value(sq: Square) -> Value {
    Value::Pair(sq.x as i64, sq.y as i64)
}

fn play(s: &mut GomokuState, at: &Value) -> Result<Option<Value>, String> {
    let (x, y) = at.as_pair().ok_or("witness is not a square")?;
    let me = s.beliefs.me;
    let result = s.command("move", &move_args(me, x as usize, y as usize));
    if let Some(reason) = result.reason() {
        return Err(reason.to_string());
    }
    Ok(Some(observe(s.env.board(), me, Square::new(x as usize, y as usize))))
}

/// Uniformly random among the best-scoring squares.
fn pick_best(s: &GomokuState, salt: u64, scored: impl Iterator<Item = (Square, u64)>) -> Option<Value> {
    let scored: Vec<(Square, u64)> = scored.collect();
    let best = scored.iter().map(|p| p.1).max()?;
    let top: Vec<Square> = scored.into_iter().filter(|p| p.1 == best).map(|p| p.0).collect();
    top.choose(&mut s.tick_rng(salt)).copied().map(square_value)
}

/// Puts a piece on a random empty square.
pub fn dumb() -> Action<GomokuState> {
    Action::new("dumb")
        .on(|s: &GomokuState| {
            if !my_turn(s) {
                return None;
            }
            let empties = s.env.board().empty_squares();
            empties.choose(&mut s.tick_rng(SALT_DUMB)).copied().map(square_value)
        })
        .try_does(play)
}

fn query_square(s: &GomokuState, predicate: &str) -> Result<Option<Value>, String> {
    if !my_turn(s) {
        return Ok(None);
    }
    let kb = s.beliefs.kb.as_ref().ok_or("agent has no knowledge base")?;
    let answer = kb.query(&pred(predicate, ["X", "Y"])).map_err(|e| e.to_string())?;
    Ok(answer.and_then(|b| Some(Value::Pair(b.int("X")?, b.int("Y")?))))
}

/// Completes five in a row when the knowledge base finds a square for it.
pub fn win1() -> Action<GomokuState> {
    Action::new("win1")
        .try_on(|s: &GomokuState| query_square(s, WIN_PREDICATE))
        .try_does(play)
}

/// Blocks a square where the opponent would complete five.
pub fn defend() -> Action<GomokuState> {
    Action::new("defend")
        .try_on(|s: &GomokuState| query_square(s, THREAT_PREDICATE))
        .try_does(play)
}

/// `win1` with a board scan as its guard.
pub fn win1_scan() -> Action<GomokuState> {
    Action::new("win1")
        .on(|s: &GomokuState| {
            if !my_turn(s) {
                return None;
            }
            winning_squares(s.env.board(), s.beliefs.me)
                .first()
                .copied()
                .map(square_value)
        })
        .try_does(play)
}

/// `defend` with a board scan as its guard.
pub fn defend_scan() -> Action<GomokuState> {
    Action::new("defend")
        .on(|s: &GomokuState| {
            if !my_turn(s) {
                return None;
            }
            winning_squares(s.env.board(), s.beliefs.me.opponent())
                .first()
                .copied()
                .map(square_value)
        })
        .try_does(play)
}

/// Grows the agent's longest lines. Enabled once the agent has a piece
/// next to some empty square.
pub fn extend() -> Action<GomokuState> {
    Action::new("extend")
        .on(|s: &GomokuState| {
            if !my_turn(s) {
                return None;
            }
            let b = s.env.board();
            let me = s.beliefs.me;
            let candidates = b
                .empty_squares()
                .into_iter()
                .filter(|&sq| neighbours(b, me, sq) > 0)
                .map(|sq| (sq, line_score(b, me, sq)));
            pick_best(s, SALT_EXTEND, candidates)
        })
        .try_does(play)
}

/// Plays where the agent's pieces are densest, or near the centre on an
/// empty board.
pub fn cluster() -> Action<GomokuState> {
    Action::new("cluster")
        .on(|s: &GomokuState| {
            if !my_turn(s) {
                return None;
            }
            let b = s.env.board();
            let me = s.beliefs.me;
            let n = b.size() as i64;
            let centre = |sq: Square| {
                let (dx, dy) = ((2 * sq.x as i64 + 1 - n).abs(), (2 * sq.y as i64 + 1 - n).abs());
                (2 * n - dx.max(dy)) as u64
            };
            let candidates = b
                .empty_squares()
                .into_iter()
                .map(|sq| (sq, neighbours(b, me, sq) as u64 * 4 * n as u64 + centre(sq)));
            pick_best(s, SALT_CLUSTER, candidates)
        })
        .try_does(play)
}
