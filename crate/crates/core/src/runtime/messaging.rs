//! Communication nodes: in-process registries that route messages between
//! the agents registered on them.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex, MutexGuard};

use serde::Serialize;
use thiserror::Error;

use crate::value::Value;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Addressing {
    Singlecast(String),
    /// Everyone on the node except the sender.
    Broadcast,
    /// Everyone with the given role, except the sender.
    Rolecast(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message {
    pub sender: String,
    pub to: Addressing,
    pub payload: Value,
    pub timestamp: u64,
}

#[derive(Debug, Default)]
struct InboxQueue {
    queue: VecDeque<Message>,
    arrivals: u64,
}

/// Multi-producer, single-consumer message queue. Cloning yields another
/// handle to the same queue.
#[derive(Clone, Debug, Default)]
pub struct Inbox {
    inner: Arc<Mutex<InboxQueue>>,
}

impl Inbox {
    fn lock(&self) -> MutexGuard<'_, InboxQueue> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub(crate) fn push(&self, msg: Message) {
        let mut q = self.lock();
        q.queue.push_back(msg);
        q.arrivals += 1;
    }

    pub fn pop(&self) -> Option<Message> {
        self.lock().queue.pop_front()
    }

    pub fn drain(&self) -> Vec<Message> {
        self.lock().queue.drain(..).collect()
    }

    pub fn peek(&self) -> Option<Message> {
        self.lock().queue.front().cloned()
    }

    pub fn len(&self) -> usize {
        self.lock().queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of messages ever delivered here.
    pub fn arrivals(&self) -> u64 {
        self.lock().arrivals
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DeliveryError {
    #[error("agent is not registered on a communication node")]
    NotConnected,
    #[error("sender `{0}` is not registered")]
    UnknownSender(String),
    #[error("no agent `{0}` on this node")]
    UnknownRecipient(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RegistrationError {
    #[error("agent `{0}` is already registered")]
    Duplicate(String),
}

#[derive(Debug)]
struct Member {
    id: String,
    role: String,
    inbox: Inbox,
}

#[derive(Debug, Default)]
struct Registry {
    members: Vec<Member>,
    sends: u64,
    delivered: u64,
}

#[derive(Clone, Debug, Default)]
pub struct ComNode {
    inner: Arc<Mutex<Registry>>,
}

impl ComNode {
    pub fn new() -> Self {
        Self::default()
    }

    fn lock(&self) -> MutexGuard<'_, Registry> {
        self.inner.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn register(&self, id: &str, role: &str, inbox: Inbox) -> Result<(), RegistrationError> {
        let mut reg = self.lock();
        if reg.members.iter().any(|m| m.id == id) {
            return Err(RegistrationError::Duplicate(id.to_string()));
        }
        reg.members.push(Member {
            id: id.to_string(),
            role: role.to_string(),
            inbox,
        });
        Ok(())
    }

    /// Registered ids in registration order.
    pub fn members(&self) -> Vec<(String, String)> {
        self.lock()
            .members
            .iter()
            .map(|m| (m.id.clone(), m.role.clone()))
            .collect()
    }

    /// Deliver `msg` to every addressee without blocking on them. Returns
    /// the fan-out.
    pub fn send(&self, msg: Message) -> Result<usize, DeliveryError> {
        let mut reg = self.lock();
        if !reg.members.iter().any(|m| m.id == msg.sender) {
            return Err(DeliveryError::UnknownSender(msg.sender));
        }
        let targets: Vec<&Member> = match &msg.to {
            Addressing::Singlecast(id) => {
                let m = reg
                    .members
                    .iter()
                    .find(|m| &m.id == id)
                    .ok_or_else(|| DeliveryError::UnknownRecipient(id.clone()))?;
                vec![m]
            }
            Addressing::Broadcast => reg.members.iter().filter(|m| m.id != msg.sender).collect(),
            Addressing::Rolecast(role) => reg
                .members
                .iter()
                .filter(|m| &m.role == role && m.id != msg.sender)
                .collect(),
        };
        for m in &targets {
            m.inbox.push(msg.clone());
        }
        let fanout = targets.len();
        reg.sends += 1;
        reg.delivered += fanout as u64;
        Ok(fanout)
    }

    /// Successful sends so far.
    pub fn sends(&self) -> u64 {
        self.lock().sends
    }

    pub fn delivered(&self) -> u64 {
        self.lock().delivered
    }
}
