//! The agent's belief store: environment handle, domain beliefs, inbox.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::environment::{CommandResult, Environment, SensingError};
use crate::goal::{GoalEdit, GoalStructure};
use crate::runtime::messaging::{Addressing, ComNode, DeliveryError, Inbox, Message};
use crate::value::Value;

/// Domain beliefs kept next to the environment mirror. `sync` runs right
/// after every successful refresh so derived beliefs track the snapshot.
pub trait Beliefs<E> {
    fn sync(&mut self, _env: &E) {}
}

impl<E> Beliefs<E> for () {}

pub struct AgentState<E, B = ()> {
    pub env: E,
    pub beliefs: B,
    agent_id: String,
    inbox: Inbox,
    com: Option<ComNode>,
    clock: u64,
    seed: u64,
    sensing_error: Option<SensingError>,
    edits: Vec<GoalEdit<AgentState<E, B>>>,
}

impl<E: Environment, B: Beliefs<E>> AgentState<E, B> {
    pub fn new(agent_id: impl Into<String>, env: E, beliefs: B) -> Self {
        AgentState {
            env,
            beliefs,
            agent_id: agent_id.into(),
            inbox: Inbox::default(),
            com: None,
            clock: 0,
            seed: 0,
            sensing_error: None,
            edits: Vec::new(),
        }
    }

    /// Sense the environment. A failed refresh leaves the old snapshot and
    /// raises the error flag that guards can inspect.
    pub fn refresh(&mut self) -> Result<(), SensingError> {
        match self.env.refresh() {
            Ok(()) => {
                self.sensing_error = None;
                self.beliefs.sync(&self.env);
                Ok(())
            }
            Err(e) => {
                self.sensing_error = Some(e.clone());
                Err(e)
            }
        }
    }

    pub fn command(&mut self, command: &str, args: &Value) -> CommandResult {
        self.env.send_command(&self.agent_id, command, args)
    }
}

impl<E, B> AgentState<E, B> {
    pub fn agent_id(&self) -> &str {
        &self.agent_id
    }

    pub fn inbox(&self) -> &Inbox {
        &self.inbox
    }

    pub fn sensing_error(&self) -> Option<&SensingError> {
        self.sensing_error.as_ref()
    }

    /// The tick currently being executed.
    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A generator fixed by (seed, tick, salt). Guards that need randomness
    /// draw from it so that re-evaluating them on the same state is stable.
    pub fn tick_rng(&self, salt: u64) -> ChaCha8Rng {
        let mix = splitmix(self.seed ^ splitmix(self.clock.wrapping_add(0x9e37)) ^ splitmix(salt));
        ChaCha8Rng::seed_from_u64(mix)
    }

    pub fn send(&self, to: Addressing, payload: Value) -> Result<usize, DeliveryError> {
        let node = self.com.as_ref().ok_or(DeliveryError::NotConnected)?;
        node.send(Message {
            sender: self.agent_id.clone(),
            to,
            payload,
            timestamp: self.clock,
        })
    }

    /// Queue `structure` to be inserted right after the current goal.
    pub fn add_after(&mut self, structure: GoalStructure<AgentState<E, B>>) {
        self.edits.push(GoalEdit::After(structure));
    }

    /// Queue `structure` as a precondition of the current goal; the rewrite
    /// wraps both in a REPEAT with the given cap.
    pub fn add_before(&mut self, structure: GoalStructure<AgentState<E, B>>, repeat_bmax: Budget) {
        self.edits.push(GoalEdit::Before(structure, repeat_bmax));
    }

    pub(crate) fn take_edits(&mut self) -> Vec<GoalEdit<AgentState<E, B>>> {
        std::mem::take(&mut self.edits)
    }

    pub(crate) fn set_clock(&mut self, clock: u64) {
        self.clock = clock;
    }

    pub(crate) fn set_seed(&mut self, seed: u64) {
        self.seed = seed;
    }

    pub(crate) fn attach(&mut self, node: ComNode) {
        self.com = Some(node);
    }
}

pub(crate) fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
