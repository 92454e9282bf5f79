//! The agent-side interface to a "real" environment.
//!
//! An [`Environment`] mirrors whatever the real environment chooses to expose
//! as a snapshot, refreshed once per deliberation cycle, and forwards commands
//! synchronously. Concrete environments add their own typed query methods on
//! top of this trait (see [`crate::gomoku::GomokuEnv`]).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::value::Value;

/// Outcome of a single command. A failure always carries a reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandResult {
    Success(Value),
    Failure(String),
}

impl CommandResult {
    pub fn ok() -> Self {
        CommandResult::Success(Value::Unit)
    }

    pub fn failure(reason: impl Into<String>) -> Self {
        CommandResult::Failure(reason.into())
    }

    pub fn unknown_command() -> Self {
        CommandResult::Failure("unknown command".to_string())
    }

    pub fn is_success(&self) -> bool {
        matches!(self, CommandResult::Success(_))
    }

    pub fn reason(&self) -> Option<&str> {
        match self {
            CommandResult::Failure(r) => Some(r),
            CommandResult::Success(_) => None,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SensingError {
    #[error("environment disconnected")]
    Disconnected,
    #[error("sensing failed: {0}")]
    Other(String),
}

pub trait Environment {
    /// Re-mirror the real environment into the local snapshot. On error the
    /// previous snapshot must be left intact.
    fn refresh(&mut self) -> Result<(), SensingError>;

    /// Names of the commands this environment accepts.
    fn commands(&self) -> Vec<String>;

    /// Forward one command to the real environment and wait for its answer.
    /// Unknown command names yield a failure result rather than an error.
    fn send_command(&mut self, agent_id: &str, command: &str, args: &Value) -> CommandResult;
}

/// An environment with nothing to sense and no commands.
#[derive(Debug, Default, Clone)]
pub struct NullEnvironment;

impl Environment for NullEnvironment {
    fn refresh(&mut self) -> Result<(), SensingError> {
        Ok(())
    }

    fn commands(&self) -> Vec<String> {
        Vec::new()
    }

    fn send_command(&mut self, _agent_id: &str, _command: &str, _args: &Value) -> CommandResult {
        CommandResult::unknown_command()
    }
}

type ScriptStep<T> = Box<dyn FnMut(&mut T)>;
type Observer = Box<dyn FnMut(&str)>;
type CommandHandler<T> = Box<dyn FnMut(&mut T, &str, &Value) -> CommandResult>;

/// Deterministic test stub. The real side owns a ground-truth value `T` that
/// evolves by one scripted change per refresh (an empty slot means "nothing
/// happened this tick"); the agent only ever sees the mirrored snapshot.
pub struct ScriptedEnvironment<T: Clone> {
    truth: T,
    snapshot: T,
    script: std::collections::VecDeque<Option<ScriptStep<T>>>,
    handlers: BTreeMap<String, CommandHandler<T>>,
    connected: bool,
    refreshes: u64,
    command_log: Vec<(String, String, Value)>,
    observer: Option<Observer>,
}

impl<T: Clone> ScriptedEnvironment<T> {
    pub fn new(initial: T) -> Self {
        ScriptedEnvironment {
            snapshot: initial.clone(),
            truth: initial,
            script: Default::default(),
            handlers: BTreeMap::new(),
            connected: true,
            refreshes: 0,
            command_log: Vec::new(),
            observer: None,
        }
    }

    /// Queue an external change that lands during a future tick.
    pub fn then(mut self, step: impl FnMut(&mut T) + 'static) -> Self {
        self.script.push_back(Some(Box::new(step)));
        self
    }

    /// Queue a tick during which the real environment does not change.
    pub fn idle(mut self) -> Self {
        self.script.push_back(None);
        self
    }

    pub fn with_command(
        mut self,
        name: &str,
        handler: impl FnMut(&mut T, &str, &Value) -> CommandResult + 'static,
    ) -> Self {
        self.handlers.insert(name.to_string(), Box::new(handler));
        self
    }

    /// Called with `"refresh"` / `"command:<name>"` on every interaction;
    /// used by tests that check call ordering.
    pub fn with_observer(mut self, observer: impl FnMut(&str) + 'static) -> Self {
        self.observer = Some(Box::new(observer));
        self
    }

    pub fn set_connected(&mut self, connected: bool) {
        self.connected = connected;
    }

    pub fn snapshot(&self) -> &T {
        &self.snapshot
    }

    pub fn truth(&self) -> &T {
        &self.truth
    }

    pub fn refresh_count(&self) -> u64 {
        self.refreshes
    }

    pub fn command_log(&self) -> &[(String, String, Value)] {
        &self.command_log
    }

    fn notify(&mut self, event: &str) {
        if let Some(obs) = self.observer.as_mut() {
            obs(event);
        }
    }
}

impl<T: Clone> Environment for ScriptedEnvironment<T> {
    fn refresh(&mut self) -> Result<(), SensingError> {
        self.notify("refresh");
        // The real side keeps evolving whether or not we can see it.
        if let Some(Some(mut step)) = self.script.pop_front() {
            step(&mut self.truth);
        }
        if !self.connected {
            return Err(SensingError::Disconnected);
        }
        self.refreshes += 1;
        self.snapshot = self.truth.clone();
        Ok(())
    }

    fn commands(&self) -> Vec<String> {
        self.handlers.keys().cloned().collect()
    }

    fn send_command(&mut self, agent_id: &str, command: &str, args: &Value) -> CommandResult {
        self.notify(&format!("command:{command}"));
        self.command_log
            .push((agent_id.to_string(), command.to_string(), args.clone()));
        match self.handlers.get_mut(command) {
            Some(handler) => {
                let result = handler(&mut self.truth, agent_id, args);
                if result.is_success() {
                    self.snapshot = self.truth.clone();
                }
                result
            }
            None => CommandResult::unknown_command(),
        }
    }
}
