//! BDI agents programmed with tactic combinators and budgeted goal
//! structures, with a small Horn-clause engine for writing guards and a
//! GoMoku demo.

pub mod action;
pub mod budget;
pub mod cli;
pub mod environment;
pub mod goal;
pub mod gomoku;
pub mod logic;
pub mod runtime;
pub mod state;
pub mod tactic;
pub mod value;

pub use action::{Action, ActionError};
pub use budget::{Budget, BudgetLedger};
pub use environment::{CommandResult, Environment, SensingError};
pub use goal::{Goal, GoalStatus, GoalStructure, GoalTree};
pub use runtime::{Agent, RunReport, RunStatus, TickOutcome, TickReport};
pub use state::{AgentState, Beliefs};
pub use tactic::{Tactic, TacticTree};
pub use value::Value;
