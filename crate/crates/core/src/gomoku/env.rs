//! The GoMoku environment: a shared "real" board and each agent's mirror.

use std::cell::RefCell;
use std::rc::Rc;

use crate::environment::{CommandResult, Environment, SensingError};
use crate::logic::KnowledgeBase;
use crate::state::{AgentState, Beliefs};
use crate::value::Value;

use super::analysis::{board_facts, winning_move_rules};
use super::board::{Board, Piece};

pub type SharedBoard = Rc<RefCell<Board>>;

pub fn shared(board: Board) -> SharedBoard {
    Rc::new(RefCell::new(board))
}

/// Predicate answering "where can I win right now".
pub const WIN_PREDICATE: &str = "winningMove";
/// Predicate answering "where could the opponent win right now".
pub const THREAT_PREDICATE: &str = "threatMove";

pub struct GomokuEnv {
    real: SharedBoard,
    snapshot: Board,
    connected: bool,
}

impl GomokuEnv {
    pub fn new(real: SharedBoard) -> Self {
        let snapshot = real.borrow().clone();
        GomokuEnv {
            real,
            snapshot,
            connected: true,
        }
    }

    /// The agent's view as of the last refresh.
    pub fn board(&self) -> &Board {
        &self.snapshot
    }

    pub fn set_connected(&mut self, connected: bool) {
        self.connected = connected;
    }
}

/// Arguments of the `move` command.
pub fn move_args(piece: Piece, x: usize, y: usize) -> Value {
    Value::map([
        ("piece", Value::from(piece.name())),
        ("x", Value::Int(x as i64)),
        ("y", Value::Int(y as i64)),
    ])
}

impl Environment for GomokuEnv {
    fn refresh(&mut self) -> Result<(), SensingError> {
        if !self.connected {
            return Err(SensingError::Disconnected);
        }
        self.snapshot.clone_from(&self.real.borrow());
        Ok(())
    }

    fn commands(&self) -> Vec<String> {
        vec!["move".into()]
    }

    fn send_command(&mut self, _agent_id: &str, command: &str, args: &Value) -> CommandResult {
        if command != "move" {
            return CommandResult::unknown_command();
        }
        let piece = args.get("piece").and_then(Value::as_text).and_then(Piece::from_name);
        let x = args.get("x").and_then(Value::as_int);
        let y = args.get("y").and_then(Value::as_int);
        let (Some(piece), Some(x), Some(y)) = (piece, x, y) else {
            return CommandResult::failure("malformed move");
        };
        if x < 0 || y < 0 {
            return CommandResult::failure("out of bounds");
        }
        let result = self.real.borrow_mut().play(piece, x as usize, y as usize);
        match result {
            Ok(()) => {
                self.snapshot.clone_from(&self.real.borrow());
                CommandResult::ok()
            }
            Err(e) => CommandResult::failure(e.to_string()),
        }
    }
}

/// What a GoMoku agent believes beyond the board mirror: which side it
/// plays and, for declarative guards, a knowledge base kept in sync with
/// the board.
pub struct GomokuBeliefs {
    pub me: Piece,
    pub kb: Option<KnowledgeBase>,
    syncs: u64,
}

impl GomokuBeliefs {
    pub fn new(me: Piece) -> Self {
        GomokuBeliefs { me, kb: None, syncs: 0 }
    }

    /// With a knowledge base holding the win and threat rules.
    pub fn with_logic(me: Piece) -> Self {
        let mut kb = KnowledgeBase::new();
        kb.add_all(winning_move_rules(WIN_PREDICATE, me))
            .and_then(|_| kb.add_all(winning_move_rules(THREAT_PREDICATE, me.opponent())))
            .expect("generated rules are well-formed");
        GomokuBeliefs {
            me,
            kb: Some(kb),
            syncs: 0,
        }
    }

    pub fn syncs(&self) -> u64 {
        self.syncs
    }

    /// Replace the board facts.
    pub fn load_board(&mut self, board: &Board) {
        if let Some(kb) = self.kb.as_mut() {
            kb.clear_facts();
            for f in board_facts(board) {
                kb.add_fact(f).expect("board facts are ground");
            }
        }
    }
}

impl Beliefs<GomokuEnv> for GomokuBeliefs {
    fn sync(&mut self, env: &GomokuEnv) {
        self.syncs += 1;
        self.load_board(env.board());
    }
}

pub type GomokuState = AgentState<GomokuEnv, GomokuBeliefs>;
