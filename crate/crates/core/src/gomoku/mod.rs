//! GoMoku: board, environment, actions and the staged strategy.

pub mod actions;
pub mod analysis;
pub mod board;
pub mod env;
pub mod game;
pub mod strategy;

pub use board::{Board, BoardError, MoveError, Piece, Square};
pub use env::{GomokuBeliefs, GomokuEnv, GomokuState};
pub use game::{play_game, GameConfig, GameResult, Player};
pub use strategy::{gomoku_goal, StrategyConfig};
