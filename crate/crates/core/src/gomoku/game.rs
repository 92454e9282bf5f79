//! Running whole games between two agents.

use serde::Serialize;

use crate::budget::Budget;
use crate::goal::GoalStatus;
use crate::runtime::harness::Harness;
use crate::runtime::{Agent, TickReport};
use crate::state::splitmix;

use super::board::{Board, BoardError, Piece};
use super::env::{shared, GomokuBeliefs, GomokuEnv, SharedBoard};
use super::strategy::{dumb_goal, gomoku_goal, StrategyConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    /// Random moves.
    Dumb,
    /// The staged strategy with declarative win/block guards.
    Tactic,
}

#[derive(Clone, Debug)]
pub struct GameConfig {
    pub size: usize,
    pub seed: u64,
    pub max_ticks: u64,
    pub cross: Player,
    pub circle: Player,
    /// Initial budget of each agent.
    pub budget: Budget,
    pub strategy: StrategyConfig,
    /// `bmax` overrides by node name, applied to tactic agents.
    pub bmax: Vec<(String, Budget)>,
}

impl Default for GameConfig {
    fn default() -> Self {
        GameConfig {
            size: 8,
            seed: 0,
            max_ticks: 10_000,
            cross: Player::Tactic,
            circle: Player::Dumb,
            budget: Budget::Unbounded,
            strategy: StrategyConfig::default(),
            bmax: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GameResult {
    pub winner: Option<Piece>,
    pub plies: usize,
    pub ticks: u64,
    pub board: Board,
    pub reports: Vec<TickReport>,
    /// Root goal status of the cross and circle agents.
    pub goal_status: [GoalStatus; 2],
    pub consumed: [i64; 2],
}

pub type GomokuAgent = Agent<GomokuEnv, GomokuBeliefs>;

pub fn make_player(kind: Player, piece: Piece, board: &SharedBoard, seed: u64, cfg: &GameConfig) -> GomokuAgent {
    let beliefs = match kind {
        Player::Dumb => GomokuBeliefs::new(piece),
        Player::Tactic => GomokuBeliefs::with_logic(piece),
    };
    let goal = match kind {
        Player::Dumb => dumb_goal(),
        Player::Tactic => {
            let mut g = gomoku_goal(cfg.strategy);
            for (node, b) in &cfg.bmax {
                g.override_bmax(node, *b);
            }
            g
        }
    };
    Agent::new(piece.name(), GomokuEnv::new(board.clone()), beliefs)
        .with_role("player")
        .with_seed(seed)
        .with_budget(cfg.budget)
        .with_goal(goal)
        .expect("goal structures are well-formed")
}

pub fn play_game(cfg: &GameConfig) -> Result<GameResult, BoardError> {
    let board = shared(Board::new(cfg.size)?);
    let mut cross = make_player(cfg.cross, Piece::Cross, &board, splitmix(cfg.seed.wrapping_mul(2)), cfg);
    let mut circle = make_player(
        cfg.circle,
        Piece::Circle,
        &board,
        splitmix(cfg.seed.wrapping_mul(2) + 1),
        cfg,
    );
    let reports = {
        let mut h = Harness::new();
        h.add(&mut cross).add(&mut circle);
        let watch = board.clone();
        let reports = h.run(cfg.max_ticks, move |_| watch.borrow().is_over());
        reports
    };
    let ticks = reports.last().map_or(0, |r| r.tick);
    let status = |a: &GomokuAgent| a.goals().map_or(GoalStatus::Unstarted, |t| t.status(t.root()));
    let consumed = |a: &GomokuAgent| a.goals().map_or(0, |t| t.ledger().consumed());
    let final_board = board.borrow().clone();
    Ok(GameResult {
        winner: final_board.winner(),
        plies: final_board.stones(),
        ticks,
        board: final_board,
        reports,
        goal_status: [status(&cross), status(&circle)],
        consumed: [consumed(&cross), consumed(&circle)],
    })
}
